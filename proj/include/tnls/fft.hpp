#pragma once

// Thin FFTW3 layer: cached plans, unnormalized transforms.
//
// Plans are created with FFTW_ESTIMATE by default; measured plans can pick
// different algorithms between runs and break bit-reproducibility.

#include <vector>

#include "tnls/types.hpp"

namespace tnls::fft {

enum class Planner { estimate, measure };
void set_planner(Planner p);
Planner planner();

// sign = -1: sum f e^{-2pi i jk/n}; sign = +1: sum F e^{+2pi i jk/n}.
void dft3(int n, const cplx* in, cplx* out, int sign);
void dft1(int n, const cplx* in, cplx* out, int sign);

// Unnormalized DCT-I (FFTW REDFT00) along all three axes of an n^3 complex
// array, applied to real and imaginary parts alike. In place.
void dct1_3d(int n, cplx* data);

// In-place 3-D DFT that skips pencils known to be zero or unwanted. With
// sign = +1 the input must vanish outside band^3 and the full output is
// produced; with sign = -1 only output entries in band^3 are valid.
void dft3_pruned(int n, cplx* data, int sign, const std::vector<char>& band);

void forget_plans();

}  // namespace tnls::fft
