/* Copyright 2026 The ssdscreen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/nnet/config.hpp"
#include "ssd/nnet/tensor.hpp"

namespace ssd::nnet {

namespace cnn_detail {

/// Rows of im2col processed per GEMM, bounds scratch memory.
inline constexpr std::size_t kChunkElements = std::size_t{1} << 18;

struct ConvGeometry {
  int h, w, cin, kernel, stride, pad, ho, wo;
  int patch() const { return kernel * kernel * cin; }
  std::size_t pixels() const { return static_cast<std::size_t>(ho) * wo; }
};

/// Per-thread reusable buffer; avoids re-faulting large allocations on
/// every layer call.
template <typename T, int Slot>
T* scratch(std::size_t n) {
  thread_local AlignedVector<T> buf;
  if (buf.size() < n) buf.resize(n);
  return buf.data();
}

/// Patches of sample `x` (NHWC, one sample) into `col` [ho*wo, k*k*cin].
template <typename T>
void im2col(const T* x, const ConvGeometry& g, T* col) {
  const int patch = g.patch();
  const int run = g.kernel * g.cin;  // one kernel row of a patch, contiguous in NHWC
  for (int oy = 0; oy < g.ho; ++oy) {
    for (int ox = 0; ox < g.wo; ++ox) {
      T* row = col + (static_cast<std::size_t>(oy) * g.wo + ox) * patch;
      const int ix0 = ox * g.stride - g.pad;
      const bool inside_x = ix0 >= 0 && ix0 + g.kernel <= g.w;
      for (int ky = 0; ky < g.kernel; ++ky) {
        const int iy = oy * g.stride + ky - g.pad;
        T* dst = row + ky * run;
        if (iy < 0 || iy >= g.h) {
          for (int c = 0; c < run; ++c) dst[c] = T(0);
          continue;
        }
        const T* line = x + static_cast<std::size_t>(iy) * g.w * g.cin;
        if (inside_x) {
          const T* src = line + static_cast<std::size_t>(ix0) * g.cin;
          for (int c = 0; c < run; ++c) dst[c] = src[c];
          continue;
        }
        for (int kx = 0; kx < g.kernel; ++kx) {
          const int ix = ix0 + kx;
          T* d = dst + kx * g.cin;
          if (ix < 0 || ix >= g.w) {
            for (int c = 0; c < g.cin; ++c) d[c] = T(0);
          } else {
            const T* src = line + static_cast<std::size_t>(ix) * g.cin;
            for (int c = 0; c < g.cin; ++c) d[c] = src[c];
          }
        }
      }
    }
  }
}

/// Adjoint of im2col: accumulates patch gradients back into `dx`.
template <typename T>
void col2im(const T* col, const ConvGeometry& g, T* dx) {
  const int patch = g.patch();
  for (int oy = 0; oy < g.ho; ++oy) {
    for (int ox = 0; ox < g.wo; ++ox) {
      const T* row = col + (static_cast<std::size_t>(oy) * g.wo + ox) * patch;
      for (int ky = 0; ky < g.kernel; ++ky) {
        const int iy = oy * g.stride + ky - g.pad;
        if (iy < 0 || iy >= g.h) continue;
        for (int kx = 0; kx < g.kernel; ++kx) {
          const int ix = ox * g.stride + kx - g.pad;
          if (ix < 0 || ix >= g.w) continue;
          const T* src = row + (ky * g.kernel + kx) * g.cin;
          T* dst = dx + (static_cast<std::size_t>(iy) * g.w + ix) * g.cin;
          for (int c = 0; c < g.cin; ++c) dst[c] += src[c];
        }
      }
    }
  }
}

}  // namespace cnn_detail

/// Small convolutional classifier. T is float for training and serving,
/// double for gradient checks.
template <typename T>
class SmallCnn {
 public:
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using MapM = Eigen::Map<Matrix>;
  using CMapM = Eigen::Map<const Matrix>;
  using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;

  /// Activations kept from a forward pass for backward().
  struct Trace {
    int batch = 0;
    std::vector<Tensor<T>> block_inputs;       // input of each block (block 0: normalised batch)
    std::vector<Tensor<T>> relu_outputs;       // [N, ho, wo, cout] after ReLU
    std::vector<std::vector<std::uint32_t>> argmax;  // per pooled output, index into relu output of its sample
    Tensor<T> last;                            // output of the final block
    Tensor<T> features;                        // [N, C] after global average pool
    Tensor<T> logits;
    Tensor<T> probs;

    /// Hash of every ReLU on/off state and pool winner; equal signatures
    /// mean the network is in the same linear region.
    std::uint64_t signature() const {
      Fnv1a h;
      for (const auto& r : relu_outputs) {
        for (const T& v : r.data) h.update_value(static_cast<std::uint8_t>(v > T(0)));
      }
      for (const auto& a : argmax) {
        for (auto i : a) h.update_value(i);
      }
      return h.digest();
    }
  };

  explicit SmallCnn(SmallCnnConfig config, std::uint64_t seed = 0) : config_(std::move(config)) {
    config_.validate();
    std::mt19937_64 rng(splitmix64(seed ^ 0x636e6eULL));
    for (const auto& [name, shape] : config_.parameter_inventory()) {
      Tensor<T> t(shape);
      if (shape.size() > 1) {
        // He-uniform for convolutions, Glorot-uniform for the dense head.
        const bool dense = name.rfind("head.", 0) == 0;
        const double fan_in = static_cast<double>(t.size()) / shape.back();
        const double fan_out = dense ? shape.back() : static_cast<double>(t.size()) / shape[2];
        const double limit = dense ? std::sqrt(6.0 / (fan_in + fan_out)) : std::sqrt(6.0 / fan_in);
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (auto& v : t.data) v = static_cast<T>(dist(rng));
      }
      params_.push_back(std::move(t));
    }
  }

  SmallCnn(SmallCnnConfig config, std::vector<Tensor<T>> params) : config_(std::move(config)), params_(std::move(params)) {
    config_.validate();
    const auto inv = config_.parameter_inventory();
    require(inv.size() == params_.size(), ErrorKind::Shape, "parameter count mismatch");
    for (std::size_t i = 0; i < inv.size(); ++i) {
      require(inv[i].second == params_[i].shape, ErrorKind::Shape,
              inv[i].first + ": expected " + shape_string(inv[i].second) + ", got " + shape_string(params_[i].shape));
    }
  }

  const SmallCnnConfig& config() const { return config_; }
  std::vector<Tensor<T>>& parameters() { return params_; }
  const std::vector<Tensor<T>>& parameters() const { return params_; }
  std::vector<std::string> parameter_names() const {
    std::vector<std::string> names;
    for (const auto& [name, shape] : config_.parameter_inventory()) names.push_back(name);
    return names;
  }

  /// Probabilities [N, num_classes] for a batch [N, H, W, C].
  Tensor<T> forward(const Tensor<T>& batch, Trace* trace = nullptr) const {
    const auto& in = config_.input_shape;
    require(batch.shape.size() == 4 && batch.shape[1] == in[0] && batch.shape[2] == in[1] && batch.shape[3] == in[2],
            ErrorKind::Shape,
            "batch shape " + shape_string(batch.shape) + " does not match [N," + std::to_string(in[0]) + "," +
                std::to_string(in[1]) + "," + std::to_string(in[2]) + "]");
    const int n = batch.shape[0];
    require(n >= 1, ErrorKind::Shape, "empty batch");
    Trace local;
    Trace& tr = trace ? *trace : local;
    tr = Trace{};
    tr.batch = n;

    Tensor<T> x = batch;
    const T offset = static_cast<T>(config_.input_offset), scale = static_cast<T>(1.0 / config_.input_scale);
    for (auto& v : x.data) v = (v - offset) * scale;

    for (std::size_t b = 0; b < config_.blocks.size(); ++b) {
      const auto g = geometry(b, x);
      const int cout = config_.blocks[b].out_channels;
      Tensor<T> y({n, g.ho, g.wo, cout});
      conv_forward(x, g, params_[2 * b], params_[2 * b + 1], y);
      Tensor<T> next;
      std::vector<std::uint32_t> arg;
      if (config_.blocks[b].pool) next = max_pool(y, arg);
      if (trace) {
        tr.block_inputs.push_back(std::move(x));
        tr.argmax.push_back(std::move(arg));
        x = config_.blocks[b].pool ? std::move(next) : y;
        tr.relu_outputs.push_back(std::move(y));
      } else {
        x = config_.blocks[b].pool ? std::move(next) : std::move(y);
      }
    }

    // Head: plain loops with a fixed summation order (Eigen's small-size
    // reductions vary with operand alignment).
    const int hh = x.shape[1], ww = x.shape[2], c = x.shape[3];
    Tensor<T> feat({n, c});
    const std::size_t pix = static_cast<std::size_t>(hh) * ww;
    for (int s = 0; s < n; ++s) {
      const T* src = x.ptr() + static_cast<std::size_t>(s) * pix * c;
      T* dst = feat.ptr() + static_cast<std::size_t>(s) * c;
      for (std::size_t p = 0; p < pix; ++p) {
        for (int ch = 0; ch < c; ++ch) dst[ch] += src[p * c + ch];
      }
      for (int ch = 0; ch < c; ++ch) dst[ch] /= static_cast<T>(pix);
    }
    const auto& wd = params_[params_.size() - 2];
    const auto& bd = params_.back();
    const int k = config_.num_classes;
    Tensor<T> logits({n, k});
    for (int s = 0; s < n; ++s) {
      for (int j = 0; j < k; ++j) {
        T acc = bd[static_cast<std::size_t>(j)];
        for (int ch = 0; ch < c; ++ch) acc += feat[static_cast<std::size_t>(s) * c + ch] * wd[static_cast<std::size_t>(ch) * k + j];
        logits[static_cast<std::size_t>(s) * k + j] = acc;
      }
    }
    require_finite(logits, "logits");
    Tensor<T> probs = softmax(logits);
    if (trace) {
      tr.last = std::move(x);
      tr.features = std::move(feat);
      tr.logits = std::move(logits);
      tr.probs = probs;
    }
    return probs;
  }

  /// Parameter gradients given dLoss/dlogits [N, K], in parameter order.
  std::vector<Tensor<T>> backward(const Trace& tr, const Tensor<T>& dlogits) const {
    const int n = tr.batch, k = config_.num_classes;
    require(dlogits.shape == std::vector<int>{n, k}, ErrorKind::Shape, "dlogits shape");
    std::vector<Tensor<T>> grads;
    for (const auto& p : params_) grads.emplace_back(p.shape);

    const int c = tr.features.shape[1];
    auto& gwd = grads[grads.size() - 2];
    auto& gbd = grads.back();
    CMapM dl(dlogits.ptr(), n, k);
    MapM(gwd.ptr(), c, k) = CMapM(tr.features.ptr(), n, c).transpose() * dl;
    MapM(gbd.ptr(), 1, k) = dl.colwise().sum();
    Tensor<T> dfeat({n, c});
    MapM(dfeat.ptr(), n, c) = dl * CMapM(params_[params_.size() - 2].ptr(), c, k).transpose();

    // Global average pool.
    Tensor<T> dx(tr.last.shape);
    const std::size_t pix = static_cast<std::size_t>(tr.last.shape[1]) * tr.last.shape[2];
    for (int s = 0; s < n; ++s) {
      for (std::size_t p = 0; p < pix; ++p) {
        for (int ch = 0; ch < c; ++ch) {
          dx[(static_cast<std::size_t>(s) * pix + p) * c + ch] =
              dfeat[static_cast<std::size_t>(s) * c + ch] / static_cast<T>(pix);
        }
      }
    }

    for (std::size_t b = config_.blocks.size(); b-- > 0;) {
      const auto& relu = tr.relu_outputs[b];
      Tensor<T> dy(relu.shape);
      if (config_.blocks[b].pool) {
        const std::size_t per_out = dx.size() / static_cast<std::size_t>(n);
        const std::size_t per_in = relu.size() / static_cast<std::size_t>(n);
        const auto& arg = tr.argmax[b];
        for (int s = 0; s < n; ++s) {
          for (std::size_t i = 0; i < per_out; ++i) {
            const std::size_t o = static_cast<std::size_t>(s) * per_out + i;
            dy[static_cast<std::size_t>(s) * per_in + arg[o]] += dx[o];
          }
        }
      } else {
        dy = dx;
      }
      for (std::size_t i = 0; i < dy.size(); ++i) {
        if (!(relu[i] > T(0))) dy[i] = T(0);
      }
      const auto& x = tr.block_inputs[b];
      const auto g = geometry(b, x);
      Tensor<T> dprev;
      conv_backward(x, g, params_[2 * b], dy, grads[2 * b], grads[2 * b + 1], b > 0 ? &dprev : nullptr);
      dx = std::move(dprev);
    }
    return grads;
  }

  static Tensor<T> softmax(const Tensor<T>& logits) {
    Tensor<T> p = logits;
    const int n = logits.shape[0], k = logits.shape[1];
    for (int s = 0; s < n; ++s) {
      T* row = p.ptr() + static_cast<std::size_t>(s) * k;
      const T mx = *std::max_element(row, row + k);
      T total = 0;
      for (int j = 0; j < k; ++j) total += (row[j] = std::exp(row[j] - mx));
      for (int j = 0; j < k; ++j) row[j] /= total;
    }
    return p;
  }

 private:
  cnn_detail::ConvGeometry geometry(std::size_t b, const Tensor<T>& x) const {
    const auto& blk = config_.blocks[b];
    cnn_detail::ConvGeometry g{x.shape[1], x.shape[2], x.shape[3], blk.kernel, blk.stride, blk.kernel / 2, 0, 0};
    g.ho = SmallCnnConfig::conv_out(g.h, g.kernel, g.stride);
    g.wo = SmallCnnConfig::conv_out(g.w, g.kernel, g.stride);
    return g;
  }

  static int chunk_samples(const cnn_detail::ConvGeometry& g, int n) {
    const std::size_t per = g.pixels() * static_cast<std::size_t>(g.patch());
    return static_cast<int>(std::clamp<std::size_t>(cnn_detail::kChunkElements / std::max<std::size_t>(per, 1), 1,
                                                    static_cast<std::size_t>(n)));
  }

  /// Convolution followed by ReLU. One GEMM per sample, so a sample's
  /// output never depends on what else is in the batch.
  static void conv_forward(const Tensor<T>& x, const cnn_detail::ConvGeometry& g, const Tensor<T>& w,
                           const Tensor<T>& bias, Tensor<T>& y) {
    const int n = x.shape[0], cout = w.shape[3], patch = g.patch();
    const std::size_t in_per = static_cast<std::size_t>(g.h) * g.w * g.cin, pix = g.pixels();
    T* col = cnn_detail::scratch<T, 0>(pix * patch);
    CMapM wm(w.ptr(), patch, cout);
    Eigen::Map<const RowVec> bv(bias.ptr(), cout);
    const auto rows = static_cast<Eigen::Index>(pix);
    for (int s = 0; s < n; ++s) {
      cnn_detail::im2col(x.ptr() + static_cast<std::size_t>(s) * in_per, g, col);
      MapM out(y.ptr() + static_cast<std::size_t>(s) * pix * cout, rows, cout);
      out.noalias() = CMapM(col, rows, patch) * wm;
      out = (out.rowwise() + bv).cwiseMax(T(0));
    }
  }

  static void conv_backward(const Tensor<T>& x, const cnn_detail::ConvGeometry& g, const Tensor<T>& w,
                            const Tensor<T>& dy, Tensor<T>& dw, Tensor<T>& db, Tensor<T>* dx) {
    const int n = x.shape[0], cout = w.shape[3], patch = g.patch();
    const std::size_t in_per = static_cast<std::size_t>(g.h) * g.w * g.cin, pix = g.pixels();
    const int chunk = chunk_samples(g, n);
    const std::size_t col_size = static_cast<std::size_t>(chunk) * pix * patch;
    T* col = cnn_detail::scratch<T, 0>(col_size);
    T* dcol = dx ? cnn_detail::scratch<T, 1>(col_size) : nullptr;
    if (dx) *dx = Tensor<T>(x.shape);
    MapM dwm(dw.ptr(), patch, cout);
    MapM dbm(db.ptr(), 1, cout);
    CMapM wm(w.ptr(), patch, cout);
    for (int s0 = 0; s0 < n; s0 += chunk) {
      const int m = std::min(chunk, n - s0);
      for (int s = 0; s < m; ++s) {
        cnn_detail::im2col(x.ptr() + static_cast<std::size_t>(s0 + s) * in_per, g, col + s * pix * patch);
      }
      const auto rows = static_cast<Eigen::Index>(static_cast<std::size_t>(m) * pix);
      CMapM dym(dy.ptr() + static_cast<std::size_t>(s0) * pix * cout, rows, cout);
      dwm.noalias() += CMapM(col, rows, patch).transpose() * dym;
      dbm += dym.colwise().sum();
      if (dx) {
        MapM(dcol, rows, patch).noalias() = dym * wm.transpose();
        for (int s = 0; s < m; ++s) {
          cnn_detail::col2im(dcol + s * pix * patch, g, dx->ptr() + static_cast<std::size_t>(s0 + s) * in_per);
        }
      }
    }
  }

  /// 2x2 stride-2 max pool, trailing odd row/column dropped. Ties keep the
  /// first element in scan order.
  static Tensor<T> max_pool(const Tensor<T>& y, std::vector<std::uint32_t>& arg) {
    const int n = y.shape[0], h = y.shape[1], w = y.shape[2], c = y.shape[3];
    const int ho = h / 2, wo = w / 2;
    Tensor<T> out({n, ho, wo, c});
    arg.assign(out.size(), 0);
    const std::size_t per_in = static_cast<std::size_t>(h) * w * c;
    for (int s = 0; s < n; ++s) {
      const T* src = y.ptr() + static_cast<std::size_t>(s) * per_in;
      for (int oy = 0; oy < ho; ++oy) {
        for (int ox = 0; ox < wo; ++ox) {
          const std::size_t o = ((static_cast<std::size_t>(s) * ho + oy) * wo + ox) * c;
          const std::size_t base = (static_cast<std::size_t>(2 * oy) * w + 2 * ox) * c;
          const std::size_t cand[4] = {base, base + c, base + static_cast<std::size_t>(w) * c,
                                       base + static_cast<std::size_t>(w + 1) * c};
          T* dst = out.ptr() + o;
          std::uint32_t* a = arg.data() + o;
          for (int ch = 0; ch < c; ++ch) {
            dst[ch] = src[cand[0] + ch];
            a[ch] = static_cast<std::uint32_t>(cand[0] + ch);
          }
          for (int q = 1; q < 4; ++q) {
            const T* row = src + cand[q];
            for (int ch = 0; ch < c; ++ch) {
              if (row[ch] > dst[ch]) {
                dst[ch] = row[ch];
                a[ch] = static_cast<std::uint32_t>(cand[q] + ch);
              }
            }
          }
        }
      }
    }
    return out;
  }

  SmallCnnConfig config_;
  std::vector<Tensor<T>> params_;
};

}  // namespace ssd::nnet
