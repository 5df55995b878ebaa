#pragma once

#include "pcris/galois.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace pcris {

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
    std::uint32_t p = 2, n = 2, m = 1, d = 2, r = 2;
    CMode c = CMode::pi;
    std::optional<std::uint32_t> D_z, D_x;
    std::optional<std::int64_t> numerator_bound;
    std::vector<std::string> suites;
    std::uint64_t seed = 1;

    /// Model description with defaults filled in; throws PreconditionError.
    PeriodModelDesc model_desc() const;
    void validate() const;
    nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();

/// Deterministic for a fixed (config, seed).
std::vector<CheckEntry> run_suite(const std::string& name, const RunConfig& cfg);

struct Report {
    nlohmann::json json;
    bool ok = true;
};
/// jobs > 1 runs suites concurrently; the report does not depend on it.
Report run_report(const RunConfig& cfg, unsigned jobs = 1);

// individual suites, also used by the acceptance tests
std::vector<CheckEntry> witt_laws(std::uint32_t p, std::uint32_t n, std::uint64_t seed, std::size_t triples = 200);
std::vector<CheckEntry> dp_laws(std::uint32_t p, std::uint32_t n, std::uint64_t seed, std::size_t samples = 100);
std::vector<CheckEntry> eigen_checks(const PeriodModel& model, std::uint64_t seed, std::size_t samples = 100);
std::vector<CheckEntry> calculus_checks(const PeriodModel& model, std::uint64_t seed, std::size_t samples = 30);
/// Every monomial [T]^e X_i^[k], k <= max_k, e in the model's exponent range, every direction.
std::vector<CheckEntry> t_primitive_sweep(const PeriodModel& model, std::uint32_t max_k = 3);
std::vector<CheckEntry> koszul_checks(const TruncatedModule& M);
std::vector<CheckEntry> lattice_kernels(std::uint32_t p, std::uint32_t r);

/// Small seeded generator; draws are reduced with % so runs agree across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t below(std::uint64_t k) { return k ? gen_() % k : 0; }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace pcris
