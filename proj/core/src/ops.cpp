#include "fastfix/gradcore/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "fastfix/error.hpp"

namespace fastfix::ops {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

template <typename T>
void require_same_shape(const char* op, Var<T> a, Var<T> b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(op, shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
}

template <typename T>
void require_rank(const char* op, Var<T> x, std::size_t rank) {
  if (x.value().rank() != rank) {
    throw ShapeError(op, "expected rank " + std::to_string(rank) + ", got " +
                             shape_str(x.shape()));
  }
}

template <typename T>
void accumulate(BasicTensor<T>& dst, const BasicTensor<T>& src) {
  T* d = dst.raw();
  const T* s = src.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += s[i];
}

// cols[(ci*k + ky)*k + kx, (n*H + y)*W + x] = x[ci, n, y + ky - p, x + kx - p]
template <typename T>
void im2col(const T* in, std::size_t cin, std::size_t n, std::size_t h,
            std::size_t w, std::size_t k, T* cols) {
  const auto pad = static_cast<std::ptrdiff_t>(k / 2);
  const auto sw = static_cast<std::ptrdiff_t>(w);
  const auto sh = static_cast<std::ptrdiff_t>(h);
  const std::size_t plane = h * w;
  const std::size_t row_len = n * plane;
  for (std::size_t ci = 0; ci < cin; ++ci) {
    for (std::size_t ky = 0; ky < k; ++ky) {
      const auto dy = static_cast<std::ptrdiff_t>(ky) - pad;
      for (std::size_t kx = 0; kx < k; ++kx) {
        T* row = cols + ((ci * k + ky) * k + kx) * row_len;
        const auto dx = static_cast<std::ptrdiff_t>(kx) - pad;
        const auto x0 = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, -dx));
        const auto x1 = static_cast<std::size_t>(std::min<std::ptrdiff_t>(sw, sw - dx));
        for (std::size_t b = 0; b < n; ++b) {
          const T* src_plane = in + (ci * n + b) * plane;
          T* dst_plane = row + b * plane;
          for (std::size_t y = 0; y < h; ++y) {
            T* dst = dst_plane + y * w;
            const auto sy = static_cast<std::ptrdiff_t>(y) + dy;
            if (sy < 0 || sy >= sh) {
              std::fill(dst, dst + w, T{0});
              continue;
            }
            const T* src = src_plane + static_cast<std::size_t>(sy) * w;
            std::fill(dst, dst + x0, T{0});
            std::copy(src + static_cast<std::ptrdiff_t>(x0) + dx,
                      src + static_cast<std::ptrdiff_t>(x1) + dx, dst + x0);
            std::fill(dst + x1, dst + w, T{0});
          }
        }
      }
    }
  }
}

template <typename T>
void col2im(const T* cols, std::size_t cin, std::size_t n, std::size_t h,
            std::size_t w, std::size_t k, T* out) {
  const auto pad = static_cast<std::ptrdiff_t>(k / 2);
  const auto sw = static_cast<std::ptrdiff_t>(w);
  const auto sh = static_cast<std::ptrdiff_t>(h);
  const std::size_t plane = h * w;
  const std::size_t row_len = n * plane;
  for (std::size_t ci = 0; ci < cin; ++ci) {
    for (std::size_t ky = 0; ky < k; ++ky) {
      const auto dy = static_cast<std::ptrdiff_t>(ky) - pad;
      for (std::size_t kx = 0; kx < k; ++kx) {
        const T* row = cols + ((ci * k + ky) * k + kx) * row_len;
        const auto dx = static_cast<std::ptrdiff_t>(kx) - pad;
        const auto x0 = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, -dx));
        const auto x1 = static_cast<std::size_t>(std::min<std::ptrdiff_t>(sw, sw - dx));
        for (std::size_t b = 0; b < n; ++b) {
          T* dst_plane = out + (ci * n + b) * plane;
          const T* src_plane = row + b * plane;
          for (std::size_t y = 0; y < h; ++y) {
            const auto sy = static_cast<std::ptrdiff_t>(y) + dy;
            if (sy < 0 || sy >= sh) continue;
            T* dst = dst_plane + static_cast<std::size_t>(sy) * w + dx;
            const T* src = src_plane + y * w;
            for (std::size_t x = x0; x < x1; ++x) dst[x] += src[x];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
Var<T> add(Var<T> a, Var<T> b) {
  require_same_shape("add", a, b);
  BasicTensor<T> out = a.value();
  accumulate(out, b.value());
  return a.tape->push(std::move(out), {a, b}, [a, b, id = a.tape->size()](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, static_cast<std::uint32_t>(id)});
    if (t.requires_grad(a)) accumulate(t.grad(a), g);
    if (t.requires_grad(b)) accumulate(t.grad(b), g);
  });
}

template <typename T>
Var<T> mul(Var<T> a, Var<T> b) {
  require_same_shape("mul", a, b);
  BasicTensor<T> out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const auto id = static_cast<std::uint32_t>(a.tape->size());
  return a.tape->push(std::move(out), {a, b}, [a, b, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    if (t.requires_grad(a)) {
      auto& ga = t.grad(a);
      const auto& bv = t.value(b);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (t.requires_grad(b)) {
      auto& gb = t.grad(b);
      const auto& av = t.value(a);
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

template <typename T>
Var<T> scale(Var<T> a, T factor) {
  BasicTensor<T> out = a.value();
  for (auto& v : out.data()) v *= factor;
  const auto id = static_cast<std::uint32_t>(a.tape->size());
  return a.tape->push(std::move(out), {a}, [a, factor, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    auto& ga = t.grad(a);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += factor * g[i];
  });
}

template <typename T>
Var<T> square(Var<T> a) {
  return mul(a, a);
}

template <typename T>
Var<T> sum(Var<T> a) {
  T total{0};
  for (const T v : a.value().data()) total += v;
  const auto id = static_cast<std::uint32_t>(a.tape->size());
  return a.tape->push(BasicTensor<T>({1}, {total}), {a}, [a, id](Tape<T>& t) {
    const T g = t.grad(Var<T>{&t, id})[0];
    for (auto& v : t.grad(a).data()) v += g;
  });
}

template <typename T>
Var<T> relu(Var<T> x) {
  BasicTensor<T> out = x.value();
  for (auto& v : out.data()) v = v > T{0} ? v : T{0};
  const auto id = static_cast<std::uint32_t>(x.tape->size());
  return x.tape->push(std::move(out), {x}, [x, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    const auto& xv = t.value(x);
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (xv[i] > T{0}) gx[i] += g[i];
    }
  });
}

template <typename T>
Var<T> conv2d(Var<T> x, Var<T> weight) {
  require_rank("conv2d", x, 4);
  require_rank("conv2d", weight, 4);
  const auto& xs = x.shape();
  const auto& ws = weight.shape();
  const std::size_t cin = xs[0], n = xs[1], h = xs[2], w = xs[3];
  const std::size_t cout = ws[0], k = ws[2];
  if (ws[1] != cin || ws[3] != k || k % 2 == 0) {
    throw ShapeError("conv2d", "weight " + shape_str(ws) + " incompatible with input " +
                                   shape_str(xs));
  }
  const std::size_t kdim = cin * k * k;
  const std::size_t cols_n = n * h * w;
  auto cols = std::make_shared<Buffer<T>>();
  cols->resize(kdim * cols_n);
  im2col(x.value().raw(), cin, n, h, w, k, cols->data());

  auto out = BasicTensor<T>::uninitialized({cout, n, h, w});
  MatMap<T> out_m(out.raw(), cout, cols_n);
  ConstMatMap<T> w_m(weight.value().raw(), cout, kdim);
  ConstMatMap<T> c_m(cols->data(), kdim, cols_n);
  out_m.noalias() = w_m * c_m;

  const auto id = static_cast<std::uint32_t>(x.tape->size());
  return x.tape->push(std::move(out), {x, weight},
                      [x, weight, cols, cin, n, h, w, k, cout, kdim, cols_n, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    ConstMatMap<T> g_m(g.raw(), cout, cols_n);
    if (t.requires_grad(weight)) {
      auto& gw = t.grad(weight);
      MatMap<T> gw_m(gw.raw(), cout, kdim);
      ConstMatMap<T> c_m(cols->data(), kdim, cols_n);
      gw_m.noalias() += g_m * c_m.transpose();
    }
    if (t.requires_grad(x)) {
      Buffer<T> dcols;
      dcols.resize(kdim * cols_n);
      MatMap<T> dc_m(dcols.data(), kdim, cols_n);
      ConstMatMap<T> w_m(t.value(weight).raw(), cout, kdim);
      dc_m.noalias() = w_m.transpose() * g_m;
      col2im(dcols.data(), cin, n, h, w, k, t.grad(x).raw());
    }
  });
}

template <typename T>
Var<T> batch_norm(Var<T> x, Var<T> gamma, Var<T> beta, BasicTensor<T>* running_mean,
                  BasicTensor<T>* running_var, const BatchNormOptions& options) {
  require_rank("batch_norm", x, 4);
  const auto& xs = x.shape();
  const std::size_t c = xs[0];
  const std::size_t m = xs[1] * xs[2] * xs[3];
  if (gamma.value().size() != c || beta.value().size() != c) {
    throw ShapeError("batch_norm", "affine size mismatch for input " + shape_str(xs));
  }
  const bool training = options.training;
  if (!training && (!running_mean || !running_var)) {
    throw Error("batch_norm: eval mode requires running statistics");
  }
  const T eps = static_cast<T>(options.eps);
  const T mom = static_cast<T>(options.momentum);

  auto xhat = std::make_shared<Buffer<T>>();
  xhat->resize(c * m);
  auto inv_std = std::make_shared<std::vector<T>>(c);
  auto out = BasicTensor<T>::uninitialized(xs);
  const T* xv = x.value().raw();
  const T* gv = gamma.value().raw();
  const T* bv = beta.value().raw();
  for (std::size_t ch = 0; ch < c; ++ch) {
    const T* row = xv + ch * m;
    T mean, var;
    if (training) {
      T s{0};
      for (std::size_t i = 0; i < m; ++i) s += row[i];
      mean = s / static_cast<T>(m);
      T sq{0};
      for (std::size_t i = 0; i < m; ++i) {
        const T d = row[i] - mean;
        sq += d * d;
      }
      var = sq / static_cast<T>(m);
      if (running_mean && running_var) {
        const T unbiased = m > 1 ? sq / static_cast<T>(m - 1) : var;
        (*running_mean)[ch] = mom * (*running_mean)[ch] + (T{1} - mom) * mean;
        (*running_var)[ch] = mom * (*running_var)[ch] + (T{1} - mom) * unbiased;
      }
    } else {
      mean = (*running_mean)[ch];
      var = (*running_var)[ch];
    }
    const T is = T{1} / std::sqrt(var + eps);
    (*inv_std)[ch] = is;
    T* xh = xhat->data() + ch * m;
    T* o = out.raw() + ch * m;
    for (std::size_t i = 0; i < m; ++i) {
      xh[i] = (row[i] - mean) * is;
      o[i] = gv[ch] * xh[i] + bv[ch];
    }
  }

  const auto id = static_cast<std::uint32_t>(x.tape->size());
  return x.tape->push(std::move(out), {x, gamma, beta},
                      [x, gamma, beta, xhat, inv_std, c, m, training, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    const bool need_x = t.requires_grad(x);
    const bool need_g = t.requires_grad(gamma);
    const bool need_b = t.requires_grad(beta);
    const T* gv = t.value(gamma).raw();
    for (std::size_t ch = 0; ch < c; ++ch) {
      const T* gy = g.raw() + ch * m;
      const T* xh = xhat->data() + ch * m;
      T sum_g{0}, sum_gx{0};
      for (std::size_t i = 0; i < m; ++i) {
        sum_g += gy[i];
        sum_gx += gy[i] * xh[i];
      }
      if (need_g) t.grad(gamma)[ch] += sum_gx;
      if (need_b) t.grad(beta)[ch] += sum_g;
      if (!need_x) continue;
      T* gx = t.grad(x).raw() + ch * m;
      const T scale_ch = gv[ch] * (*inv_std)[ch];
      if (training) {
        const T inv_m = T{1} / static_cast<T>(m);
        const T mean_g = sum_g * inv_m;
        const T mean_gx = sum_gx * inv_m;
        for (std::size_t i = 0; i < m; ++i) {
          gx[i] += scale_ch * (gy[i] - mean_g - xh[i] * mean_gx);
        }
      } else {
        for (std::size_t i = 0; i < m; ++i) gx[i] += scale_ch * gy[i];
      }
    }
  });
}

template <typename T>
Var<T> max_pool2(Var<T> x) {
  require_rank("max_pool2", x, 4);
  const auto& xs = x.shape();
  const std::size_t planes = xs[0] * xs[1], h = xs[2], w = xs[3];
  if (h % 2 || w % 2) throw ShapeError("max_pool2", "odd spatial size " + shape_str(xs));
  const std::size_t oh = h / 2, ow = w / 2;
  auto out = BasicTensor<T>::uninitialized({xs[0], xs[1], oh, ow});
  auto argmax = std::make_shared<std::vector<std::uint32_t>>(out.size());
  const T* xv = x.value().raw();
  for (std::size_t p = 0; p < planes; ++p) {
    const T* src = xv + p * h * w;
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t xx = 0; xx < ow; ++xx) {
        std::size_t best = (2 * y) * w + 2 * xx;
        for (const std::size_t cand : {best + 1, best + w, best + w + 1}) {
          if (src[cand] > src[best]) best = cand;
        }
        const std::size_t o = (p * oh + y) * ow + xx;
        out[o] = src[best];
        (*argmax)[o] = static_cast<std::uint32_t>(p * h * w + best);
      }
    }
  }
  const auto id = static_cast<std::uint32_t>(x.tape->size());
  return x.tape->push(std::move(out), {x}, [x, argmax, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    auto& gx = t.grad(x);
    for (std::size_t o = 0; o < g.size(); ++o) gx[(*argmax)[o]] += g[o];
  });
}

template <typename T>
Var<T> global_avg_pool(Var<T> x) {
  require_rank("global_avg_pool", x, 4);
  const auto& xs = x.shape();
  const std::size_t rows = xs[0] * xs[1], plane = xs[2] * xs[3];
  auto out = BasicTensor<T>::uninitialized({xs[0], xs[1]});
  const T* xv = x.value().raw();
  const T inv = T{1} / static_cast<T>(plane);
  for (std::size_t r = 0; r < rows; ++r) {
    T s{0};
    for (std::size_t i = 0; i < plane; ++i) s += xv[r * plane + i];
    out[r] = s * inv;
  }
  const auto id = static_cast<std::uint32_t>(x.tape->size());
  return x.tape->push(std::move(out), {x}, [x, rows, plane, inv, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    T* gx = t.grad(x).raw();
    for (std::size_t r = 0; r < rows; ++r) {
      const T v = g[r] * inv;
      for (std::size_t i = 0; i < plane; ++i) gx[r * plane + i] += v;
    }
  });
}

template <typename T>
Var<T> linear(Var<T> x, Var<T> weight, Var<T> bias) {
  require_rank("linear", x, 2);
  require_rank("linear", weight, 2);
  const std::size_t c = x.shape()[0], n = x.shape()[1];
  const std::size_t k = weight.shape()[0];
  if (weight.shape()[1] != c || bias.value().size() != k) {
    throw ShapeError("linear", "weight " + shape_str(weight.shape()) +
                                   " incompatible with input " + shape_str(x.shape()));
  }
  auto out = BasicTensor<T>::uninitialized({n, k});
  MatMap<T> out_m(out.raw(), n, k);
  ConstMatMap<T> x_m(x.value().raw(), c, n);
  ConstMatMap<T> w_m(weight.value().raw(), k, c);
  out_m.noalias() = x_m.transpose() * w_m.transpose();
  const T* bv = bias.value().raw();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < k; ++j) out[r * k + j] += bv[j];
  }
  const auto id = static_cast<std::uint32_t>(x.tape->size());
  return x.tape->push(std::move(out), {x, weight, bias}, [x, weight, bias, c, n, k, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    ConstMatMap<T> g_m(g.raw(), n, k);
    if (t.requires_grad(weight)) {
      MatMap<T> gw(t.grad(weight).raw(), k, c);
      ConstMatMap<T> x_m(t.value(x).raw(), c, n);
      gw.noalias() += g_m.transpose() * x_m.transpose();
    }
    if (t.requires_grad(bias)) {
      auto& gb = t.grad(bias);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < k; ++j) gb[j] += g[r * k + j];
      }
    }
    if (t.requires_grad(x)) {
      MatMap<T> gx(t.grad(x).raw(), c, n);
      ConstMatMap<T> w_m(t.value(weight).raw(), k, c);
      gx.noalias() += w_m.transpose() * g_m.transpose();
    }
  });
}

template <typename T>
Var<T> slice_rows(Var<T> x, std::size_t begin, std::size_t end) {
  require_rank("slice_rows", x, 2);
  const std::size_t n = x.shape()[0], k = x.shape()[1];
  if (begin > end || end > n) {
    throw ShapeError("slice_rows", "range [" + std::to_string(begin) + ", " +
                                       std::to_string(end) + ") outside " + shape_str(x.shape()));
  }
  const auto* src = x.value().raw();
  Buffer<T> data(src + begin * k, src + end * k);
  const auto id = static_cast<std::uint32_t>(x.tape->size());
  return x.tape->push(BasicTensor<T>({end - begin, k}, std::move(data)), {x},
                      [x, begin, k, id](Tape<T>& t) {
    const auto& g = t.grad(Var<T>{&t, id});
    T* gx = t.grad(x).raw() + begin * k;
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
  });
}

template <typename T>
Var<T> softmax_cross_entropy(Var<T> logits, std::span<const int> targets,
                             std::span<const T> weights, T normalizer) {
  require_rank("softmax_cross_entropy", logits, 2);
  const std::size_t n = logits.shape()[0], k = logits.shape()[1];
  if (targets.size() != n) {
    throw ShapeError("softmax_cross_entropy", "got " + std::to_string(targets.size()) +
                                                  " targets for " + std::to_string(n) + " rows");
  }
  if (!weights.empty() && weights.size() != n) {
    throw ShapeError("softmax_cross_entropy", "weight count mismatch");
  }
  for (const int y : targets) {
    if (y < 0 || static_cast<std::size_t>(y) >= k) {
      throw Error("softmax_cross_entropy: target " + std::to_string(y) +
                  " outside [0, " + std::to_string(k) + ")");
    }
  }
  const T norm = normalizer > T{0} ? normalizer : static_cast<T>(n);
  auto probs = std::make_shared<BasicTensor<T>>(softmax(logits.value()));
  const T* z = logits.value().raw();
  T total{0};
  for (std::size_t i = 0; i < n; ++i) {
    const T wi = weights.empty() ? T{1} : weights[i];
    if (wi == T{0}) continue;
    const T* row = z + i * k;
    const T mx = *std::max_element(row, row + k);
    T s{0};
    for (std::size_t j = 0; j < k; ++j) s += std::exp(row[j] - mx);
    total += wi * (std::log(s) + mx - row[targets[i]]);
  }
  std::vector<int> tgt(targets.begin(), targets.end());
  std::vector<T> wts(weights.begin(), weights.end());
  const auto id = static_cast<std::uint32_t>(logits.tape->size());
  return logits.tape->push(BasicTensor<T>({1}, {total / norm}), {logits},
                           [logits, probs, tgt = std::move(tgt), wts = std::move(wts), n, k,
                            norm, id](Tape<T>& t) {
    const T g = t.grad(Var<T>{&t, id})[0] / norm;
    T* gz = t.grad(logits).raw();
    for (std::size_t i = 0; i < n; ++i) {
      const T wi = wts.empty() ? T{1} : wts[i];
      if (wi == T{0}) continue;
      const T c = g * wi;
      for (std::size_t j = 0; j < k; ++j) gz[i * k + j] += c * (*probs)[i * k + j];
      gz[i * k + tgt[i]] -= c;
    }
  });
}

template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits) {
  if (logits.rank() != 2) throw ShapeError("softmax", "expected [N, K]");
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  auto out = BasicTensor<T>::uninitialized(logits.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = logits.raw() + i * k;
    T* o = out.raw() + i * k;
    const T mx = *std::max_element(row, row + k);
    T s{0};
    for (std::size_t j = 0; j < k; ++j) {
      o[j] = std::exp(row[j] - mx);
      s += o[j];
    }
    for (std::size_t j = 0; j < k; ++j) o[j] /= s;
  }
  return out;
}

template <typename T>
BasicTensor<T> nchw_to_cnhw(const BasicTensor<T>& x) {
  if (x.rank() != 4) throw ShapeError("nchw_to_cnhw", "expected rank 4, got " + shape_str(x.shape()));
  const std::size_t n = x.dim(0), c = x.dim(1), plane = x.dim(2) * x.dim(3);
  auto out = BasicTensor<T>::uninitialized({c, n, x.dim(2), x.dim(3)});
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      std::copy_n(x.raw() + (b * c + ch) * plane, plane, out.raw() + (ch * n + b) * plane);
    }
  }
  return out;
}

#define FASTFIX_INSTANTIATE_OPS(T)                                                       \
  template Var<T> add(Var<T>, Var<T>);                                                   \
  template Var<T> mul(Var<T>, Var<T>);                                                   \
  template Var<T> scale(Var<T>, T);                                                      \
  template Var<T> square(Var<T>);                                                        \
  template Var<T> sum(Var<T>);                                                           \
  template Var<T> relu(Var<T>);                                                          \
  template Var<T> conv2d(Var<T>, Var<T>);                                                \
  template Var<T> batch_norm(Var<T>, Var<T>, Var<T>, BasicTensor<T>*, BasicTensor<T>*,   \
                             const BatchNormOptions&);                                   \
  template Var<T> max_pool2(Var<T>);                                                     \
  template Var<T> global_avg_pool(Var<T>);                                               \
  template Var<T> linear(Var<T>, Var<T>, Var<T>);                                        \
  template Var<T> slice_rows(Var<T>, std::size_t, std::size_t);                          \
  template Var<T> softmax_cross_entropy(Var<T>, std::span<const int>, std::span<const T>, \
                                        T);                                              \
  template BasicTensor<T> softmax(const BasicTensor<T>&);                                \
  template BasicTensor<T> nchw_to_cnhw(const BasicTensor<T>&);

FASTFIX_INSTANTIATE_OPS(float)
FASTFIX_INSTANTIATE_OPS(double)
FASTFIX_INSTANTIATE_OPS(long double)

#undef FASTFIX_INSTANTIATE_OPS

}  // namespace fastfix::ops
