#pragma once

#include <cstdint>
#include <optional>

#include "kpkit/multipliers.hpp"

namespace kpkit {

enum class Support { full, q_only, lowfreq_only, pplus_only, pminus_only, single_block };

/// Random real fields with coefficient magnitude ~ <xi>^-a <lambda>^-b.
/// Coefficients are drawn per lattice mode from a counter-based hash of
/// (seed, m, n), so refining the grid keeps the shared modes bit-identical.
/// pplus_only / pminus_only intersect with Q (the estimates only ever apply
/// P+- inside Q). delta_mode overrides everything with a single cosine mode.
struct SpectrumSpec {
    double a = 2.0;
    double b = 2.0;
    Support support = Support::full;
    DyadicIndex block{};
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    std::optional<std::pair<int, int>> delta_mode;
};

SpectralField random_spectrum(const SpectrumSpec& spec, const Grid2D& g);
PhysicalField random_field(const SpectrumSpec& spec, const Grid2D& g);

/// Stateless seed derivation for per-sample streams.
std::uint64_t derive_seed(std::uint64_t master, const std::string& tag, std::uint64_t index);

} // namespace kpkit
