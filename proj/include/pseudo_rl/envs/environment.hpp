#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pseudo_rl/core/rng.hpp"

namespace pseudo_rl {

struct ContinuousActions {
    std::size_t dim = 1;
    double bound = 1.0; // actions live in [-bound, bound]^dim
};

struct DiscreteActions {
    std::size_t count = 2;
};

struct EnvSpec {
    std::size_t obs_dim = 0;
    std::variant<ContinuousActions, DiscreteActions> actions;
    double dt = 0.05;
    std::optional<std::size_t> max_episode_steps;

    bool is_discrete() const { return std::holds_alternative<DiscreteActions>(actions); }
    /// Continuous: vector length. Discrete: 1.
    std::size_t action_dim() const;
    /// Continuous action bound; 1 for discrete tasks.
    double action_bound() const;
    /// Discrete action count; 0 for continuous tasks.
    std::size_t action_count() const;
};

/// Either a continuous vector or a discrete id; which one is meaningful is
/// determined by the EnvSpec.
struct Action {
    std::vector<double> values;
    std::size_t id = 0;

    static Action continuous(std::vector<double> v) { return Action{std::move(v), 0}; }
    static Action discrete(std::size_t id) { return Action{{}, id}; }

    friend bool operator==(const Action&, const Action&) = default;
};

struct StepResult {
    std::vector<double> obs;
    double reward = 0.0;
    bool terminal = false;
    bool truncated = false;
};

/// A seedable control task advanced one environment step at a time. Each
/// instance owns its random stream, so reset() draws are reproducible.
class Environment {
public:
    virtual ~Environment() = default;

    virtual const EnvSpec& spec() const = 0;
    virtual std::vector<double> reset() = 0;
    /// Throws ConfigError for an invalid action (non-finite torque, bad id).
    virtual StepResult step(const Action& action) = 0;
};

/// "pendulum" | "pushbar" | "integrator". Unknown names throw ConfigError.
std::unique_ptr<Environment> make_environment(const std::string& name, Rng rng);

} // namespace pseudo_rl
