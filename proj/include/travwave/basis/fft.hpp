#pragma once

#include <vector>

#include <unsupported/Eigen/FFT>

#include "travwave/common.hpp"

namespace travwave::detail {

/// Unscaled multi-dimensional DFT over a row-major array with the given
/// extents: forward computes sum_j x_j e^{-2 pi i k.j/N}, inverse uses the
/// opposite sign. Neither direction divides by N.
inline void fft_nd(CVec& data, const std::vector<int>& dims, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const int rank = static_cast<int>(dims.size());
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  if (total != data.size()) throw ConfigurationError("fft_nd: extent mismatch");

  std::vector<cplx> line, out;
  for (int axis = 0; axis < rank; ++axis) {
    const int len = dims[axis];
    Eigen::Index stride = 1;
    for (int a = axis + 1; a < rank; ++a) stride *= dims[a];
    const Eigen::Index outer = total / (stride * len);
    line.resize(len);
    out.resize(len);
    for (Eigen::Index o = 0; o < outer; ++o) {
      for (Eigen::Index s = 0; s < stride; ++s) {
        const Eigen::Index base = o * stride * len + s;
        for (int k = 0; k < len; ++k) line[k] = data[base + k * stride];
        if (inverse)
          fft.inv(out.data(), line.data(), len);
        else
          fft.fwd(out.data(), line.data(), len);
        for (int k = 0; k < len; ++k) data[base + k * stride] = out[k];
      }
    }
  }
}

/// Signed wavenumber of FFT bin k for a transform of length n.
inline int signed_bin(int k, int n) { return k < n / 2 ? k : k - n; }

}  // namespace travwave::detail
