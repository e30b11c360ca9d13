// Copyright 2026 The CTSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctsr/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

#include "ctsr/error.hpp"

namespace ctsr::kernels {
namespace {

struct ConvGeometry {
  std::size_t in_h, in_w, c_in;
  std::size_t k_h, k_w, c_out;
  std::size_t stride;
  SamePadding pad_h, pad_w;
};

std::string Str(std::size_t v) { return std::to_string(v); }

// Input coordinate read by output position `o` at kernel tap `k`; negative
// or past the end means the zero padding.
inline std::ptrdiff_t InputIndex(std::size_t o, std::size_t k, std::size_t stride,
                                 std::size_t pad_before) {
  return static_cast<std::ptrdiff_t>(o * stride + k) -
         static_cast<std::ptrdiff_t>(pad_before);
}

void ExpectRank(const char* op, const char* what, const Tensor& t,
                std::size_t rank) {
  if (t.rank() != rank) {
    throw ShapeError(op, std::string(what) + " rank",
                     "expected rank " + Str(rank) + ", got shape " +
                         ShapeString(t.shape()));
  }
}

ConvGeometry MakeGeometry(const char* op, std::size_t in_h, std::size_t in_w,
                          std::size_t c_in, std::size_t k_h, std::size_t k_w,
                          std::size_t w_c_in, std::size_t c_out,
                          const Tensor& b, std::size_t stride) {
  if (stride == 0) throw ShapeError(op, "stride", "must be positive");
  if (w_c_in != c_in) {
    throw ShapeError(op, "input channels",
                     "input has " + Str(c_in) + " but weights expect " +
                         Str(w_c_in));
  }
  if (b.rank() != 1 || b.dim(0) != c_out) {
    throw ShapeError(op, "bias", "expected length " + Str(c_out) + ", got " +
                                     ShapeString(b.shape()));
  }
  ConvGeometry g{in_h, in_w, c_in, k_h, k_w, c_out, stride, {}, {}};
  g.pad_h = ComputeSamePadding(in_h, k_h, stride);
  g.pad_w = ComputeSamePadding(in_w, k_w, stride);
  return g;
}

// Generic loops, used when the output channel count is not a multiple of 8.
void ConvForwardGeneric(const ConvGeometry& g, const double* x, const double* w,
                        const double* b, double* out) {
  const std::size_t co = g.c_out;
  std::vector<double> acc(co);
  for (std::size_t oy = 0; oy < g.pad_h.out; ++oy) {
    for (std::size_t ox = 0; ox < g.pad_w.out; ++ox) {
      std::copy(b, b + co, acc.begin());
      for (std::size_t ky = 0; ky < g.k_h; ++ky) {
        const std::ptrdiff_t iy = InputIndex(oy, ky, g.stride, g.pad_h.before);
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
        for (std::size_t kx = 0; kx < g.k_w; ++kx) {
          const std::ptrdiff_t ix = InputIndex(ox, kx, g.stride, g.pad_w.before);
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
          const double* xin = x + (iy * g.in_w + ix) * g.c_in;
          const double* wk = w + (ky * g.k_w + kx) * g.c_in * co;
          for (std::size_t c = 0; c < g.c_in; ++c) {
            const double a = xin[c];
            const double* wr = wk + c * co;
            for (std::size_t j = 0; j < co; ++j) acc[j] += a * wr[j];
          }
        }
      }
      std::copy(acc.begin(), acc.end(), out + (oy * g.pad_w.out + ox) * co);
    }
  }
}

void ConvBackwardGeneric(const ConvGeometry& g, const double* x, const double* w,
                         const double* gout, double* gx, double* gw) {
  const std::size_t co = g.c_out;
  for (std::size_t oy = 0; oy < g.pad_h.out; ++oy) {
    for (std::size_t ox = 0; ox < g.pad_w.out; ++ox) {
      const double* go = gout + (oy * g.pad_w.out + ox) * co;
      for (std::size_t ky = 0; ky < g.k_h; ++ky) {
        const std::ptrdiff_t iy = InputIndex(oy, ky, g.stride, g.pad_h.before);
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
        for (std::size_t kx = 0; kx < g.k_w; ++kx) {
          const std::ptrdiff_t ix = InputIndex(ox, kx, g.stride, g.pad_w.before);
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
          const std::size_t in_off = (iy * g.in_w + ix) * g.c_in;
          const std::size_t w_off = (ky * g.k_w + kx) * g.c_in * co;
          for (std::size_t c = 0; c < g.c_in; ++c) {
            const double* wr = w + w_off + c * co;
            if (gw) {
              const double a = x[in_off + c];
              double* gwr = gw + w_off + c * co;
              for (std::size_t j = 0; j < co; ++j) gwr[j] += a * go[j];
            }
            if (gx) {
              double s = 0.0;
              for (std::size_t j = 0; j < co; ++j) s += wr[j] * go[j];
              gx[in_off + c] += s;
            }
          }
        }
      }
    }
  }
}

// Register-blocked paths for output channel counts that are multiples of 8.
// Accumulators are rows of 8-wide vectors held across the whole reduction;
// summation order is fixed, so results are deterministic.
using Vec8 = double __attribute__((vector_size(64)));

inline Vec8 Load8(const double* p) {
  Vec8 v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void Store8(double* p, Vec8 v) { std::memcpy(p, &v, sizeof v); }

template <std::size_t kCo>
void ConvForwardBlocked(const ConvGeometry& g, const double* x, const double* w,
                        const double* b, double* out) {
  constexpr std::size_t kV = kCo / 8;
  // Independent partial sums over input channels hide FMA latency when the
  // row is short.
  constexpr std::size_t kU = kV >= 4 ? 1 : 8 / kV;
  for (std::size_t oy = 0; oy < g.pad_h.out; ++oy) {
    for (std::size_t ox = 0; ox < g.pad_w.out; ++ox) {
      Vec8 acc[kU][kV];
#pragma GCC unroll 16
      for (std::size_t v = 0; v < kV; ++v) {
        acc[0][v] = Load8(b + 8 * v);
#pragma GCC unroll 8
        for (std::size_t u = 1; u < kU; ++u) acc[u][v] = Vec8{};
      }
      for (std::size_t ky = 0; ky < g.k_h; ++ky) {
        const std::ptrdiff_t iy = InputIndex(oy, ky, g.stride, g.pad_h.before);
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
        for (std::size_t kx = 0; kx < g.k_w; ++kx) {
          const std::ptrdiff_t ix = InputIndex(ox, kx, g.stride, g.pad_w.before);
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
          const double* xin = x + (iy * g.in_w + ix) * g.c_in;
          const double* wk = w + (ky * g.k_w + kx) * g.c_in * kCo;
          std::size_t c = 0;
          for (; c + kU <= g.c_in; c += kU) {
#pragma GCC unroll 8
            for (std::size_t u = 0; u < kU; ++u) {
              const double a = xin[c + u];
              const double* wr = wk + (c + u) * kCo;
#pragma GCC unroll 16
              for (std::size_t v = 0; v < kV; ++v) acc[u][v] += a * Load8(wr + 8 * v);
            }
          }
          for (; c < g.c_in; ++c) {
            const double a = xin[c];
            const double* wr = wk + c * kCo;
#pragma GCC unroll 16
            for (std::size_t v = 0; v < kV; ++v) acc[0][v] += a * Load8(wr + 8 * v);
          }
        }
      }
      double* o = out + (oy * g.pad_w.out + ox) * kCo;
#pragma GCC unroll 16
      for (std::size_t v = 0; v < kV; ++v) {
#pragma GCC unroll 8
        for (std::size_t u = 1; u < kU; ++u) acc[0][v] += acc[u][v];
        Store8(o + 8 * v, acc[0][v]);
      }
    }
  }
}

// x (pixel, c) times W^T, accumulated into gx, for c_in a multiple of 8:
// gx[c] += sum_j go[j] * w[c][j], vectorised over c with w transposed per tap.
template <std::size_t kNv>
void GxRowChunk(const double* go, std::size_t co, const double* wt, std::size_t c_in,
                std::size_t c0, double* gxr) {
  Vec8 acc[kNv];
#pragma GCC unroll 8
  for (std::size_t v = 0; v < kNv; ++v) acc[v] = Load8(gxr + c0 + 8 * v);
  for (std::size_t j = 0; j < co; ++j) {
    const double a = go[j];
    const double* row = wt + j * c_in + c0;
#pragma GCC unroll 8
    for (std::size_t v = 0; v < kNv; ++v) acc[v] += a * Load8(row + 8 * v);
  }
#pragma GCC unroll 8
  for (std::size_t v = 0; v < kNv; ++v) Store8(gxr + c0 + 8 * v, acc[v]);
}

void GxRow(const double* go, std::size_t co, const double* wt, std::size_t c_in,
           double* gxr) {
  std::size_t c0 = 0;
  for (; c0 + 64 <= c_in; c0 += 64) GxRowChunk<8>(go, co, wt, c_in, c0, gxr);
  for (; c0 + 32 <= c_in; c0 += 32) GxRowChunk<4>(go, co, wt, c_in, c0, gxr);
  for (; c0 + 16 <= c_in; c0 += 16) GxRowChunk<2>(go, co, wt, c_in, c0, gxr);
  for (; c0 + 8 <= c_in; c0 += 8) GxRowChunk<1>(go, co, wt, c_in, c0, gxr);
}

// Weight gradient of taps (ky, kx..kx+2) for a single input channel.
template <std::size_t kCo>
void StemWeightGrad(const ConvGeometry& g, const double* x, const double* gout,
                    std::size_t ky, std::size_t kx0, double* gw) {
  constexpr std::size_t kV = kCo / 8;
  constexpr std::size_t kT = kV >= 8 ? 3 : 24 / kV;
  const std::size_t taps = std::min(kT, g.k_w - kx0);
  Vec8 acc[kT][kV] = {};
  for (std::size_t oy = 0; oy < g.pad_h.out; ++oy) {
    const std::ptrdiff_t iy = InputIndex(oy, ky, g.stride, g.pad_h.before);
    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
    const double* xrow = x + iy * g.in_w;
    for (std::size_t ox = 0; ox < g.pad_w.out; ++ox) {
      double xv[kT];
#pragma GCC unroll 8
      for (std::size_t t = 0; t < kT; ++t) {
        const std::ptrdiff_t ix = InputIndex(ox, kx0 + t, g.stride, g.pad_w.before);
        xv[t] = t < taps && ix >= 0 && ix < static_cast<std::ptrdiff_t>(g.in_w) ? xrow[ix]
                                                                                : 0.0;
      }
      const double* go = gout + (oy * g.pad_w.out + ox) * kCo;
#pragma GCC unroll 16
      for (std::size_t v = 0; v < kV; ++v) {
        const Vec8 gv = Load8(go + 8 * v);
#pragma GCC unroll 8
        for (std::size_t t = 0; t < kT; ++t) acc[t][v] += xv[t] * gv;
      }
    }
  }
  for (std::size_t t = 0; t < taps; ++t) {
    double* gwr = gw + (ky * g.k_w + kx0 + t) * kCo;
#pragma GCC unroll 16
    for (std::size_t v = 0; v < kV; ++v) Store8(gwr + 8 * v, Load8(gwr + 8 * v) + acc[t][v]);
  }
}

// kCb input channels share one pass over the output gradient when the weight
// gradient is accumulated.
template <std::size_t kCo, std::size_t kCb>
void ConvBackwardBlocked(const ConvGeometry& g, const double* x, const double* w,
                         const double* gout, double* gx, double* gw) {
  constexpr std::size_t kV = kCo / 8;
  const bool gx_vector = g.c_in % 8 == 0;
  std::vector<double> wt(gx && gx_vector ? kCo * g.c_in : 0);
  for (std::size_t ky = 0; ky < g.k_h; ++ky) {
    for (std::size_t kx = 0; kx < g.k_w; ++kx) {
      const std::size_t w_off = (ky * g.k_w + kx) * g.c_in * kCo;
      if (gw && kCb == 1 && g.c_in == 1) {
        // A single input channel leaves registers for three taps, so each
        // output-gradient row is read once per three taps.
        if (kx % 3 == 0) StemWeightGrad<kCo>(g, x, gout, ky, kx, gw);
      } else if (gw) {
        for (std::size_t c0 = 0; c0 < g.c_in; c0 += kCb) {
          const std::size_t cb = std::min(kCb, g.c_in - c0);
          Vec8 acc[kCb][kV] = {};
          for (std::size_t oy = 0; oy < g.pad_h.out; ++oy) {
            const std::ptrdiff_t iy = InputIndex(oy, ky, g.stride, g.pad_h.before);
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
            for (std::size_t ox = 0; ox < g.pad_w.out; ++ox) {
              const std::ptrdiff_t ix = InputIndex(ox, kx, g.stride, g.pad_w.before);
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
              const double* go = gout + (oy * g.pad_w.out + ox) * kCo;
              const double* xin = x + (iy * g.in_w + ix) * g.c_in + c0;
              if (cb == kCb) {
#pragma GCC unroll 16
                for (std::size_t v = 0; v < kV; ++v) {
                  const Vec8 gv = Load8(go + 8 * v);
#pragma GCC unroll 16
                  for (std::size_t c = 0; c < kCb; ++c) acc[c][v] += xin[c] * gv;
                }
              } else {
                for (std::size_t c = 0; c < cb; ++c) {
#pragma GCC unroll 16
                  for (std::size_t v = 0; v < kV; ++v) acc[c][v] += xin[c] * Load8(go + 8 * v);
                }
              }
            }
          }
          for (std::size_t c = 0; c < cb; ++c) {
            double* gwr = gw + w_off + (c0 + c) * kCo;
#pragma GCC unroll 16
            for (std::size_t v = 0; v < kV; ++v) {
              Store8(gwr + 8 * v, Load8(gwr + 8 * v) + acc[c][v]);
            }
          }
        }
      }
      if (gx && gx_vector) {
        for (std::size_t c = 0; c < g.c_in; ++c) {
          for (std::size_t j = 0; j < kCo; ++j) wt[j * g.c_in + c] = w[w_off + c * kCo + j];
        }
        for (std::size_t oy = 0; oy < g.pad_h.out; ++oy) {
          const std::ptrdiff_t iy = InputIndex(oy, ky, g.stride, g.pad_h.before);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
          for (std::size_t ox = 0; ox < g.pad_w.out; ++ox) {
            const std::ptrdiff_t ix = InputIndex(ox, kx, g.stride, g.pad_w.before);
            if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
            GxRow(gout + (oy * g.pad_w.out + ox) * kCo, kCo, wt.data(), g.c_in,
                  gx + (iy * g.in_w + ix) * g.c_in);
          }
        }
      } else if (gx) {
        for (std::size_t oy = 0; oy < g.pad_h.out; ++oy) {
          const std::ptrdiff_t iy = InputIndex(oy, ky, g.stride, g.pad_h.before);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
          for (std::size_t ox = 0; ox < g.pad_w.out; ++ox) {
            const std::ptrdiff_t ix = InputIndex(ox, kx, g.stride, g.pad_w.before);
            if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
            const double* go = gout + (oy * g.pad_w.out + ox) * kCo;
            Vec8 gv[kV];
#pragma GCC unroll 16
            for (std::size_t v = 0; v < kV; ++v) gv[v] = Load8(go + 8 * v);
            double* gxr = gx + (iy * g.in_w + ix) * g.c_in;
            for (std::size_t c = 0; c < g.c_in; ++c) {
              const double* wr = w + w_off + c * kCo;
              Vec8 s = gv[0] * Load8(wr);
#pragma GCC unroll 16
              for (std::size_t v = 1; v < kV; ++v) s += gv[v] * Load8(wr + 8 * v);
              gxr[c] += ((s[0] + s[4]) + (s[2] + s[6])) + ((s[1] + s[5]) + (s[3] + s[7]));
            }
          }
        }
      }
    }
  }
}

void ConvForwardRaw(const ConvGeometry& g, const double* x, const double* w,
                    const double* b, double* out) {
  switch (g.c_out) {
    case 8: return ConvForwardBlocked<8>(g, x, w, b, out);
    case 16: return ConvForwardBlocked<16>(g, x, w, b, out);
    case 32: return ConvForwardBlocked<32>(g, x, w, b, out);
    case 64: return ConvForwardBlocked<64>(g, x, w, b, out);
    case 128: return ConvForwardBlocked<128>(g, x, w, b, out);
    default: return ConvForwardGeneric(g, x, w, b, out);
  }
}

void ConvBackwardRaw(const ConvGeometry& g, const double* x, const double* w,
                     const double* gout, double* gx, double* gw, double* gb) {
  if (gb) {
    const std::size_t pixels = g.pad_h.out * g.pad_w.out;
    for (std::size_t p = 0; p < pixels; ++p) {
      const double* go = gout + p * g.c_out;
      for (std::size_t j = 0; j < g.c_out; ++j) gb[j] += go[j];
    }
  }
  // Sixteen accumulator vectors per pass; a single input channel (the stems)
  // gets its own instantiation.
  const bool single = g.c_in == 1;
  switch (g.c_out) {
    case 8:
      return single ? ConvBackwardBlocked<8, 1>(g, x, w, gout, gx, gw)
                    : ConvBackwardBlocked<8, 16>(g, x, w, gout, gx, gw);
    case 16:
      return single ? ConvBackwardBlocked<16, 1>(g, x, w, gout, gx, gw)
                    : ConvBackwardBlocked<16, 8>(g, x, w, gout, gx, gw);
    case 32:
      return single ? ConvBackwardBlocked<32, 1>(g, x, w, gout, gx, gw)
                    : ConvBackwardBlocked<32, 4>(g, x, w, gout, gx, gw);
    case 64:
      return single ? ConvBackwardBlocked<64, 1>(g, x, w, gout, gx, gw)
                    : ConvBackwardBlocked<64, 2>(g, x, w, gout, gx, gw);
    case 128: return ConvBackwardBlocked<128, 1>(g, x, w, gout, gx, gw);
    default: return ConvBackwardGeneric(g, x, w, gout, gx, gw);
  }
}

void ExpectGradShape(const char* op, const char* what, const Tensor* grad,
                     const Shape& shape) {
  if (grad && grad->shape() != shape) {
    throw ShapeError(op, what,
                     "gradient shape " + ShapeString(grad->shape()) +
                         " differs from " + ShapeString(shape));
  }
}

ConvGeometry Conv2dGeometry(const Tensor& x, const Tensor& w, const Tensor& b,
                            std::size_t stride) {
  ExpectRank("conv2d", "input", x, 3);
  ExpectRank("conv2d", "weights", w, 4);
  return MakeGeometry("conv2d", x.dim(0), x.dim(1), x.dim(2), w.dim(0),
                      w.dim(1), w.dim(2), w.dim(3), b, stride);
}

ConvGeometry Conv1dGeometry(const Tensor& x, const Tensor& w, const Tensor& b,
                            std::size_t stride) {
  ExpectRank("conv1d", "input", x, 2);
  ExpectRank("conv1d", "weights", w, 3);
  ConvGeometry g = MakeGeometry("conv1d", 1, x.dim(0), x.dim(1), 1, w.dim(0),
                                w.dim(1), w.dim(2), b, stride);
  g.pad_h = {1, 0, 0};
  return g;
}

}  // namespace

SamePadding ComputeSamePadding(std::size_t n, std::size_t kernel,
                               std::size_t stride) {
  SamePadding p;
  p.out = std::max<std::size_t>(1, (n + stride - 1) / stride);
  const std::size_t needed = (p.out - 1) * stride + kernel;
  const std::size_t total = needed > n ? needed - n : 0;
  p.before = total / 2;
  p.after = total - p.before;
  return p;
}

Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& b,
              std::size_t stride) {
  const ConvGeometry g = Conv2dGeometry(x, w, b, stride);
  Tensor out({g.pad_h.out, g.pad_w.out, g.c_out});
  ConvForwardRaw(g, x.data().data(), w.data().data(), b.data().data(),
                 out.data().data());
  return out;
}

void Conv2dBackward(const Tensor& x, const Tensor& w, std::size_t stride,
                    const Tensor& grad_out, Tensor* grad_x, Tensor* grad_w,
                    Tensor* grad_b) {
  const Tensor b({w.dim(3)});
  const ConvGeometry g = Conv2dGeometry(x, w, b, stride);
  if (grad_out.shape() != Shape{g.pad_h.out, g.pad_w.out, g.c_out}) {
    throw ShapeError("conv2d backward", "grad_out",
                     "unexpected shape " + ShapeString(grad_out.shape()));
  }
  ExpectGradShape("conv2d backward", "input", grad_x, x.shape());
  ExpectGradShape("conv2d backward", "weights", grad_w, w.shape());
  ExpectGradShape("conv2d backward", "bias", grad_b, b.shape());
  ConvBackwardRaw(g, x.data().data(), w.data().data(), grad_out.data().data(),
                  grad_x ? grad_x->data().data() : nullptr,
                  grad_w ? grad_w->data().data() : nullptr,
                  grad_b ? grad_b->data().data() : nullptr);
}

Tensor Conv1d(const Tensor& x, const Tensor& w, const Tensor& b,
              std::size_t stride) {
  const ConvGeometry g = Conv1dGeometry(x, w, b, stride);
  Tensor out({g.pad_w.out, g.c_out});
  ConvForwardRaw(g, x.data().data(), w.data().data(), b.data().data(),
                 out.data().data());
  return out;
}

void Conv1dBackward(const Tensor& x, const Tensor& w, std::size_t stride,
                    const Tensor& grad_out, Tensor* grad_x, Tensor* grad_w,
                    Tensor* grad_b) {
  const Tensor b({w.dim(2)});
  const ConvGeometry g = Conv1dGeometry(x, w, b, stride);
  if (grad_out.shape() != Shape{g.pad_w.out, g.c_out}) {
    throw ShapeError("conv1d backward", "grad_out",
                     "unexpected shape " + ShapeString(grad_out.shape()));
  }
  ExpectGradShape("conv1d backward", "input", grad_x, x.shape());
  ExpectGradShape("conv1d backward", "weights", grad_w, w.shape());
  ExpectGradShape("conv1d backward", "bias", grad_b, b.shape());
  ConvBackwardRaw(g, x.data().data(), w.data().data(), grad_out.data().data(),
                  grad_x ? grad_x->data().data() : nullptr,
                  grad_w ? grad_w->data().data() : nullptr,
                  grad_b ? grad_b->data().data() : nullptr);
}

Tensor Relu(const Tensor& x) { return Relu(Tensor(x)); }

Tensor Relu(Tensor&& x) {
  for (double& v : x.data()) v = v > 0.0 ? v : 0.0;
  return std::move(x);
}

void ReluBackward(const Tensor& x, const Tensor& grad_out, Tensor& grad_x) {
  if (x.shape() != grad_out.shape() || x.shape() != grad_x.shape()) {
    throw ShapeError("relu backward", "shape", "operand shapes differ");
  }
  const auto xs = x.data();
  const auto go = grad_out.data();
  auto gx = grad_x.data();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    gx[i] += xs[i] > 0.0 ? go[i] : 0.0;
  }
}

Tensor GlobalAvgPool(const Tensor& x) {
  if (x.rank() < 2) {
    throw ShapeError("global_avg_pool", "input rank",
                     "expected rank >= 2, got " + ShapeString(x.shape()));
  }
  const std::size_t c = x.shape().back();
  const std::size_t n = x.size() / c;
  Tensor out({c});
  const auto xs = x.data();
  auto o = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c; ++j) o[j] += xs[i * c + j];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : o) v *= inv;
  return out;
}

void GlobalAvgPoolBackward(const Tensor& x, const Tensor& grad_out,
                           Tensor& grad_x) {
  const std::size_t c = x.shape().back();
  if (grad_out.shape() != Shape{c} || grad_x.shape() != x.shape()) {
    throw ShapeError("global_avg_pool backward", "shape",
                     "operand shapes differ");
  }
  const std::size_t n = x.size() / c;
  const double inv = 1.0 / static_cast<double>(n);
  const auto go = grad_out.data();
  auto gx = grad_x.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c; ++j) gx[i * c + j] += go[j] * inv;
  }
}

Tensor Linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  ExpectRank("linear", "input", x, 1);
  ExpectRank("linear", "weights", w, 2);
  const std::size_t n_in = w.dim(0);
  const std::size_t n_out = w.dim(1);
  if (x.dim(0) != n_in) {
    throw ShapeError("linear", "input features",
                     "input has " + Str(x.dim(0)) + " but weights expect " +
                         Str(n_in));
  }
  if (b.rank() != 1 || b.dim(0) != n_out) {
    throw ShapeError("linear", "bias", "expected length " + Str(n_out));
  }
  Tensor out = b;
  auto o = out.data();
  const auto xs = x.data();
  const auto ws = w.data();
  for (std::size_t i = 0; i < n_in; ++i) {
    for (std::size_t j = 0; j < n_out; ++j) o[j] += xs[i] * ws[i * n_out + j];
  }
  return out;
}

void LinearBackward(const Tensor& x, const Tensor& w, const Tensor& grad_out,
                    Tensor* grad_x, Tensor* grad_w, Tensor* grad_b) {
  const std::size_t n_in = w.dim(0);
  const std::size_t n_out = w.dim(1);
  if (grad_out.shape() != Shape{n_out} || x.shape() != Shape{n_in}) {
    throw ShapeError("linear backward", "shape", "operand shapes differ");
  }
  ExpectGradShape("linear backward", "input", grad_x, x.shape());
  ExpectGradShape("linear backward", "weights", grad_w, w.shape());
  ExpectGradShape("linear backward", "bias", grad_b, Shape{n_out});
  const auto xs = x.data();
  const auto ws = w.data();
  const auto go = grad_out.data();
  for (std::size_t i = 0; i < n_in; ++i) {
    if (grad_w) {
      auto gw = grad_w->data();
      for (std::size_t j = 0; j < n_out; ++j) gw[i * n_out + j] += xs[i] * go[j];
    }
    if (grad_x) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_out; ++j) s += ws[i * n_out + j] * go[j];
      grad_x->data()[i] += s;
    }
  }
  if (grad_b) {
    auto gb = grad_b->data();
    for (std::size_t j = 0; j < n_out; ++j) gb[j] += go[j];
  }
}

}  // namespace ctsr::kernels
