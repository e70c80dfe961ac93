#pragma once
// Monte-Carlo experiment harness.
//
// Five experiments built from the library pipeline:
//   first_level_decay : band-truncation error of the curve pairing across
//                       dyadic levels j (log2 slope in j) and its window
//                       scaling (exponent in t-s);
//   holder_first      : window-scaling exponent of the smoothed pairing at
//                       fixed j plus the exact per-coordinate variance
//                       identity Var = ||filtered swept region||^2;
//   second_level      : window-scaling exponent of the iterated-integral
//                       level of the lifted path, uniform over j, and the
//                       same-sample Cauchy decay across consecutive j;
//   wilson_density    : holonomy law of lassos from the field pipeline vs
//                       the group Brownian-motion oracle at equal enclosed
//                       area (moments, eigenvalue-angle KS for n = 2,
//                       equal-area shape independence);
//   independence      : joint same-sample holonomies of lassos with
//                       disjoint loop interiors; pairwise correlation of
//                       Re tr U against the 3/sqrt(N) null bound.
//
// Determinism: sample i uses seed_base ^ i; per-sample results land in
// preallocated index slots and every reduction runs in index order, so
// reports are byte-identical for any worker count.  Oracle streams derive
// from mix64(seed_base, tag) so they never collide with field samples.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ym2/curves.hpp"
#include "ym2/grid.hpp"
#include "ym2/report.hpp"

namespace ym2 {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dyadic window ladder anchored at s: [s, s + dt * 2^k], k = 0..octaves-1.
struct WindowSpec {
    double s = 0.25;
    double dt = 0.0625;
    int octaves = 4;

    std::vector<std::pair<double, double>> windows() const;
};

struct ExperimentConfig {
    std::string name;
    TorusGrid grid{8.0, 512};
    int dim = 3;      // noise channels; transport requires dim == group_n^2 - 1
    int group_n = 2;  // SU(n)
    int samples = 200;
    std::uint64_t seed_base = 1;

    int j_lo = 3;      // slope range (first_level_decay) / Cauchy range (second_level)
    int j_hi = 6;
    int j_fixed = 5;   // fixed band (holder_first, t-exponent, transport experiments)

    WindowSpec window;    // primary window ladder
    WindowSpec t_window;  // secondary ladder (first_level_decay t-exponent)

    int tgrid_nodes = 257;       // lift grid density (second_level)
    int transport_steps = 2048;  // fixed midpoint step count (wilson, independence)
    int oracle_steps = 1024;     // oracle Euler steps

    std::optional<Curve> curve;  // pairing experiments; default per experiment
    std::vector<Lasso> lassos;   // holonomy experiments

    std::map<std::string, double> tol;  // tolerance overrides by key

    double tol_or(const std::string& key, double dflt) const;
    void validate() const;  // common checks; throws ConfigError

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j,
                                      std::optional<std::uint64_t> derived_seed = {});
    // FNV-1a hash of the canonical serialized form.
    std::string canonical_hash() const;
};

// Tuned default configuration for each experiment name.
ExperimentConfig default_experiment(const std::string& name);
const std::vector<std::string>& experiment_names();

// Dispatch by cfg.name.
ExperimentReport run_experiment(const ExperimentConfig& cfg, int workers = 1);

ExperimentReport exp_first_level_decay(const ExperimentConfig& cfg, int workers = 1);
ExperimentReport exp_holder_first(const ExperimentConfig& cfg, int workers = 1);
ExperimentReport exp_second_level(const ExperimentConfig& cfg, int workers = 1);
ExperimentReport exp_wilson_density(const ExperimentConfig& cfg, int workers = 1);
ExperimentReport exp_independence(const ExperimentConfig& cfg, int workers = 1);

// Deterministic sample-parallel map: body(i) once for each i in [0, n).
// Bodies write to disjoint slots; first exception is rethrown here.
void parallel_samples(int n, int workers, const std::function<void(int)>& body);

// Whether the open interiors of two simple positively oriented polygon
// loops overlap (shared boundary points do not count).
bool loop_interiors_overlap(const Curve& a, const Curve& b);

// Suite-level configuration: {"seed", "workers", "experiments": [...]}.
// Experiments without an explicit "seed" get mix64(seed, index).
struct RunConfig {
    std::uint64_t seed = 1;
    int workers = 1;
    std::vector<ExperimentConfig> experiments;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j,
                               std::optional<std::uint64_t> seed_override = {});
};

}  // namespace ym2
