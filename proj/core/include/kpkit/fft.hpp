#pragma once

#include "kpkit/field.hpp"

namespace kpkit {

/// Forward transform to Fourier-series amplitudes: a pure mode
/// cos(xi_m x + lambda_n y) maps to two coefficients of modulus 1/2.
/// Nyquist row/column is zeroed. Rejects non-finite input.
SpectralField forward_transform(const PhysicalField& f);

/// Inverse transform; requires a Hermitian-symmetric (real) field.
PhysicalField inverse_transform(const SpectralField& F);

/// Unnormalized complex DFTs used internally (thread-safe; the FFTW plan
/// cache is mutex-guarded, execution runs concurrently).
void dft2(const Grid2D& g, std::vector<cplx>& data, int sign);
void dft1(int n, cplx* data, int sign);

/// Zero the m=0 column (the d/dx^{-1} constraint: zero x-mean per lambda).
void project_zero_xmean(SpectralField& F);

/// Fraction of total energy sitting on the m=0 column.
double zero_xmean_energy_fraction(const SpectralField& F);

/// Embed coefficients into a finer grid (same Lx, Ly; Nx, Ny multiplied).
/// Represents the identical function at higher resolution.
SpectralField embed(const SpectralField& F, const Grid2D& fine);

} // namespace kpkit
