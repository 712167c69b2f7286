#include "doctest.h"

#include <string>

#include "fsde/config.hpp"

using namespace fsde;

namespace {

const std::string full_config = R"(# full estimation setup
[model]
drift = damped_sine
params = 1.0, 0.5
x0 = 0.7
sigma = 0.4
H = 0.8

[grid]
T = 2.0
n = 128

[estimation]
basis = trig(-2,2,5)
N_train = 200
N_eval = 100
kappa = 0.5
target = bprime
epsilon = 0.001
m = opt:2
seed = 42

[sweep]
N_list = 50, 100, 200, 400
replications = 10
)";

}  // namespace

TEST_CASE("config parsing basics") {
    const auto config = ConfigFile::parse("a = 1\n[s]\n b = two # comment\n\nc=3\n");
    CHECK(config.get("a") == "1");
    CHECK(config.get("s.b") == "two");
    CHECK(config.get("s.c") == "3");
    CHECK(config.has("s.b"));
    CHECK_FALSE(config.has("b"));
    CHECK(config.get_or("s.missing", "fallback") == "fallback");
    CHECK(config.get_double("a") == 1.0);
    CHECK(config.get_size("s.c") == 3);

    CHECK_THROWS(ConfigFile::parse("[unterminated\n"));
    CHECK_THROWS(ConfigFile::parse("no equals sign\n"));
    CHECK_THROWS(ConfigFile::parse("= value\n"));
}

TEST_CASE("missing keys raise MissingKey naming the field") {
    const auto config = ConfigFile::parse("[model]\ndrift = linear\n");
    try {
        config.get("model.H");
        FAIL("expected MissingKey");
    } catch (const MissingKey& e) {
        CHECK(std::string(e.what()).find("model.H") != std::string::npos);
    }
}

TEST_CASE("typed getters reject malformed values") {
    const auto config = ConfigFile::parse("a = 1.5x\nb = -3\nc = 1, 2, oops\n");
    CHECK_THROWS(config.get_double("a"));
    CHECK_THROWS(config.get_size("b"));
    CHECK_THROWS(config.get_doubles("c"));
    CHECK(config.get_double("b") == -3.0);
}

TEST_CASE("trial config from a full file") {
    const auto trial = trial_config_from(ConfigFile::parse(full_config));
    CHECK(trial.drift_name == "damped_sine");
    CHECK(trial.drift_params == std::vector<double>{1.0, 0.5});
    CHECK(trial.x0 == 0.7);
    CHECK(trial.sigma == 0.4);
    CHECK(trial.H == 0.8);
    CHECK(trial.T == 2.0);
    CHECK(trial.n == 128);
    CHECK(trial.basis.kind == BasisKind::trigonometric);
    CHECK(trial.basis.m == 5);
    CHECK(trial.N_train == 200);
    CHECK(trial.N_eval == 100);
    CHECK(trial.kappa == 0.5);
    CHECK(trial.target == EstimationTarget::drift_derivative);
    CHECK_FALSE(trial.epsilon_policy.use_rule);
    CHECK(trial.epsilon_policy.fixed == 0.001);
    CHECK(trial.m_policy.use_m_opt);
    CHECK(trial.m_policy.smoothness == 2.0);
    CHECK(trial.master_seed == 42);
}

TEST_CASE("trial config defaults") {
    const auto trial = trial_config_from(ConfigFile::parse(R"(
[model]
drift = zero
x0 = 0.0
sigma = 1.0
H = 0.75
[grid]
T = 1.0
n = 64
[estimation]
basis = hermite(8)
N_train = 50
seed = 7
)"));
    CHECK(trial.drift_params.empty());
    CHECK(trial.N_eval == 0);
    CHECK(trial.kappa == 1.0);
    CHECK(trial.target == EstimationTarget::drift);
    CHECK(trial.epsilon_policy.use_rule);
    CHECK_FALSE(trial.m_policy.use_m_opt);
    CHECK(trial.basis.kind == BasisKind::hermite);
}

TEST_CASE("trial config rejects bad enumerations") {
    auto base = [](const std::string& extra) {
        return ConfigFile::parse(
            "[model]\ndrift = zero\nx0 = 0\nsigma = 1\nH = 0.75\n"
            "[grid]\nT = 1\nn = 8\n"
            "[estimation]\nbasis = trig(0,1,1)\nN_train = 10\nseed = 1\n" +
            extra);
    };
    CHECK_THROWS(trial_config_from(base("target = nonsense\n")));
    CHECK_THROWS(trial_config_from(base("epsilon = -0.5\n")));
    CHECK_THROWS(trial_config_from(base("m = sometimes\n")));
    CHECK_THROWS_AS(trial_config_from(ConfigFile::parse("[model]\ndrift = zero\n")), MissingKey);
}

TEST_CASE("sweep settings") {
    const auto settings = sweep_settings_from(ConfigFile::parse(full_config));
    CHECK(settings.N_list == std::vector<std::size_t>{50, 100, 200, 400});
    CHECK(settings.replications == 10);
    CHECK_THROWS_AS(sweep_settings_from(ConfigFile::parse("[sweep]\nreplications = 2\n")),
                    MissingKey);
}
