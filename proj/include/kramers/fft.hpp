#pragma once

#include <complex>
#include <cstddef>

namespace kramers::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

// Batched 1-D complex DFT (unnormalised, FFTW sign convention).
// Element i of transform b lives at data[b*dist + i*stride].
// Plans are cached per shape and safe to execute from several threads.
void many(int n, int howmany, int stride, int dist, Direction dir, const cplx* in, cplx* out);

inline void forward(int n, const cplx* in, cplx* out) { many(n, 1, 1, n, Direction::forward, in, out); }
inline void backward(int n, const cplx* in, cplx* out) { many(n, 1, 1, n, Direction::backward, in, out); }

} // namespace kramers::fft
