#include "ecggan/nn/layers.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>

#include "ecggan/error.hpp"

namespace ecggan::nn {

namespace {

void check_shape(const LayerSpec& spec, const Shape& expected, const Shape& got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::ShapeMismatch,
                spec.name + ": " + what + " shape " + shape_string(got) + ", expected " + shape_string(expected));
  }
}

void uniform_fill(std::vector<double>& v, Rng& rng, double limit) {
  for (auto& x : v) x = rng.uniform(-limit, limit);
}

}  // namespace

void Layer::not_recorded() const {
  throw Error(ErrorCode::NotRecorded, spec_.name + ": backward called without a recorded forward pass");
}

// ---------------------------------------------------------------- Conv2D
//
// Internally the convolution runs channels-first with time innermost so each
// kernel tap is a contiguous multiply-add along time. The zero-padded input is
// split into `stride.time` phases: padded time index p + stride * j lives at
// phase p, position j. Tap kt of output t then reads phase kt % stride at
// position t + kt / stride.

Conv2D::Conv2D(LayerSpec spec) : Layer(std::move(spec)) {
  param_count(spec_);
  weights_.assign(patch_size() * spec_.out_size, 0.0);
  bias_.assign(spec_.out_size, 0.0);
  grad_weights_.assign(weights_.size(), 0.0);
  grad_bias_.assign(bias_.size(), 0.0);
}

std::vector<ParamView> Conv2D::params() { return {{weights_, grad_weights_}, {bias_, grad_bias_}}; }

void Conv2D::init(Rng& rng) {
  const double area = static_cast<double>(spec_.kernel.height * spec_.kernel.width);
  const double limit = std::sqrt(6.0 / (area * static_cast<double>(spec_.in_size + spec_.out_size)));
  uniform_fill(weights_, rng, limit);
  std::fill(bias_.begin(), bias_.end(), 0.0);
}

namespace {

constexpr std::size_t kTile = 8;   // time steps per register tile
constexpr std::size_t kBlock = 4;  // channels per register tile

std::size_t round_up(std::size_t n, std::size_t m) { return (n + m - 1) / m * m; }

typedef double Vec4 __attribute__((vector_size(32)));

inline Vec4 load4(const double* p) {
  Vec4 v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store4(double* p, Vec4 v) { std::memcpy(p, &v, sizeof v); }

inline Vec4 splat(double x) { return Vec4{x, x, x, x}; }

// An NB x kTile accumulator tile held as vectors.
template <std::size_t NB>
struct Tile {
  Vec4 v[NB][2] = {};

  // v[b] += w[b] * src[0..kTile)
  void axpy(const double* w, const double* src) {
    const Vec4 s0 = load4(src), s1 = load4(src + 4);
    for (std::size_t b = 0; b < NB; ++b) {
      const Vec4 wb = splat(w[b]);
      v[b][0] += wb * s0;
      v[b][1] += wb * s1;
    }
  }

  // v[b] += d[b * stride] * src[0..kTile)
  void outer(const double* d, std::size_t stride, const double* src) {
    const Vec4 s0 = load4(src), s1 = load4(src + 4);
    for (std::size_t b = 0; b < NB; ++b) {
      const Vec4 db = splat(d[b * stride]);
      v[b][0] += db * s0;
      v[b][1] += db * s1;
    }
  }

  double at(std::size_t b, std::size_t t) const { return v[b][t / 4][t % 4]; }
};

// Calls f.template operator()<nb>() for a block width known only at run time.
template <class F>
void with_block(std::size_t nb, F&& f) {
  switch (nb) {
    case 1: f.template operator()<1>(); break;
    case 2: f.template operator()<2>(); break;
    case 3: f.template operator()<3>(); break;
    default: f.template operator()<4>(); break;
  }
}

}  // namespace

Conv2D::Geometry Conv2D::geometry(const Shape& input) const {
  Geometry g;
  g.in_time = input[0];
  g.in_leads = input[1];
  g.out_time = same_out(g.in_time, spec_.stride.time);
  g.out_leads = same_out(g.in_leads, spec_.stride.lead);
  g.pad_time = same_pad_before(g.in_time, spec_.kernel.height, spec_.stride.time);
  g.pad_lead = same_pad_before(g.in_leads, spec_.kernel.width, spec_.stride.lead);
  const std::size_t padded = (g.out_time - 1) * spec_.stride.time + spec_.kernel.height;
  g.phase_len = (padded + spec_.stride.time - 1) / spec_.stride.time;
  g.taps_per_phase = (spec_.kernel.height + spec_.stride.time - 1) / spec_.stride.time;
  g.time_span = round_up(g.out_time, kTile);
  // Room for whole tiles plus a full tap window past the last one.
  g.row_len = round_up(std::max(g.phase_len, g.time_span + round_up(g.taps_per_phase, kTile)), kTile);
  return g;
}

// Offset of (lead, channel, phase) in the phase-split buffer.
std::size_t Conv2D::phase_offset(const Geometry& g, std::size_t lead, std::size_t channel, std::size_t phase) const {
  return ((lead * spec_.in_size + channel) * spec_.stride.time + phase) * g.row_len;
}

// Lead index feeding output lead `lo` through kernel column `kl`, or -1 when it falls in padding.
long Conv2D::source_lead(const Geometry& g, std::size_t lo, std::size_t kl) const {
  const long li = static_cast<long>(lo * spec_.stride.lead + kl) - static_cast<long>(g.pad_lead);
  return (li < 0 || li >= static_cast<long>(g.in_leads)) ? -1 : li;
}

Tensor Conv2D::forward(const Tensor& input) {
  const Shape out_shape = output_shape(spec_, input.shape());
  const Geometry g = geometry(input.shape());
  const std::size_t C = spec_.in_size, O = spec_.out_size, st = spec_.stride.time;
  const std::size_t kh = spec_.kernel.height, kw = spec_.kernel.width;
  const std::size_t Op = round_up(O, kBlock);

  auto& xb = phased_input_;
  xb.assign(g.in_leads * C * st * g.row_len, 0.0);
  for (std::size_t t = 0; t < g.in_time; ++t) {
    const std::size_t tp = t + g.pad_time;
    for (std::size_t l = 0; l < g.in_leads; ++l)
      for (std::size_t c = 0; c < C; ++c) xb[phase_offset(g, l, c, tp % st) + tp / st] = input[(t * g.in_leads + l) * C + c];
  }
  input_shape_ = input.shape();

  // Weights and bias with the output channel padded to whole blocks.
  std::vector<double> w(kh * kw * C * Op, 0.0), bias(Op, 0.0);
  for (std::size_t tap = 0; tap < kh * kw * C; ++tap)
    std::copy_n(weights_.data() + tap * O, O, w.data() + tap * Op);
  std::copy(bias_.begin(), bias_.end(), bias.begin());

  std::vector<std::size_t> tap_offset(kh);
  for (std::size_t kt = 0; kt < kh; ++kt) tap_offset[kt] = (kt % st) * g.row_len + kt / st;

  Tensor out(out_shape);
  for (std::size_t lo = 0; lo < g.out_leads; ++lo) {
    for (std::size_t o0 = 0; o0 < O; o0 += kBlock) {
      with_block(std::min(kBlock, O - o0), [&]<std::size_t NB>() {
        for (std::size_t t0 = 0; t0 < g.time_span; t0 += kTile) {
          Tile<NB> acc;
          for (std::size_t b = 0; b < NB; ++b) acc.v[b][0] = acc.v[b][1] = splat(bias[o0 + b]);
          for (std::size_t kl = 0; kl < kw; ++kl) {
            const long li = source_lead(g, lo, kl);
            if (li < 0) continue;
            for (std::size_t c = 0; c < C; ++c) {
              const double* row = xb.data() + phase_offset(g, static_cast<std::size_t>(li), c, 0) + t0;
              const double* wk = w.data() + (kl * C + c) * Op + o0;
              const std::size_t wstep = kw * C * Op;
              for (std::size_t kt = 0; kt < kh; ++kt) acc.axpy(wk + kt * wstep, row + tap_offset[kt]);
            }
          }
          const std::size_t nt = std::min(kTile, g.out_time - t0);
          for (std::size_t b = 0; b < NB; ++b)
            for (std::size_t t = 0; t < nt; ++t) out[((t0 + t) * g.out_leads + lo) * O + o0 + b] = acc.at(b, t);
        }
      });
    }
  }
  return out;
}

Tensor Conv2D::backward(const Tensor& upstream, bool param_grads) {
  if (!input_shape_) not_recorded();
  const Shape& in_shape = *input_shape_;
  check_shape(spec_, output_shape(spec_, in_shape), upstream.shape(), "upstream");
  const Geometry g = geometry(in_shape);
  const std::size_t C = spec_.in_size, O = spec_.out_size, st = spec_.stride.time;
  const std::size_t kh = spec_.kernel.height, kw = spec_.kernel.width;
  const std::size_t T = g.out_time, M = g.taps_per_phase;
  const std::size_t Op = round_up(O, kBlock), Cp = round_up(C, kBlock);
  const auto& xb = phased_input_;

  // Upstream gradient, channels-first, with M zeros in front of each row so
  // that position j - m stays in range, and zero rows for padded channels.
  const std::size_t front = round_up(M, kTile);
  const std::size_t dy_len = front + g.row_len;
  std::vector<double> dy(g.out_leads * Op * dy_len + front + 2 * kTile, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t lo = 0; lo < g.out_leads; ++lo)
      for (std::size_t o = 0; o < O; ++o) dy[(lo * Op + o) * dy_len + front + t] = upstream[(t * g.out_leads + lo) * O + o];
  auto dy_row = [&](std::size_t lo, std::size_t o) { return dy.data() + (lo * Op + o) * dy_len + front; };

  if (param_grads) {
    for (std::size_t lo = 0; lo < g.out_leads; ++lo)
      for (std::size_t o = 0; o < O; ++o) {
        const double* d = dy_row(lo, o);
        double sum = 0.0;
        for (std::size_t t = 0; t < T; ++t) sum += d[t];
        grad_bias_[o] += sum;
      }

    // dW[kt][kl][c][o] = sum over lo, t of x[li][c][kt % st][t + kt / st] * dy[lo][o][t].
    // Vectorized over the taps of one phase, which sit contiguously in the phase row.
    for (std::size_t lo = 0; lo < g.out_leads; ++lo) {
      for (std::size_t kl = 0; kl < kw; ++kl) {
        const long li = source_lead(g, lo, kl);
        if (li < 0) continue;
        for (std::size_t c = 0; c < C; ++c) {
          for (std::size_t p = 0; p < st; ++p) {
            const double* xr = xb.data() + phase_offset(g, static_cast<std::size_t>(li), c, p);
            for (std::size_t o0 = 0; o0 < O; o0 += kBlock) {
              with_block(std::min(kBlock, O - o0), [&]<std::size_t NB>() {
                const double* d0 = dy_row(lo, o0);
                for (std::size_t m0 = 0; m0 < M; m0 += kTile) {
                  Tile<NB> acc;
                  for (std::size_t t = 0; t < T; ++t) acc.outer(d0 + t, dy_len, xr + t + m0);
                  for (std::size_t b = 0; b < NB; ++b)
                    for (std::size_t m = 0; m < kTile && m0 + m < M; ++m) {
                      const std::size_t kt = (m0 + m) * st + p;
                      if (kt < kh) grad_weights_[((kt * kw + kl) * C + c) * O + o0 + b] += acc.at(b, m);
                    }
                }
              });
            }
          }
        }
      }
    }
  }

  // Input gradient as a correlation of dy with the transposed kernel:
  // dx[li][c][p][j] = sum over kl, o, m of w[m*st+p][kl][c][o] * dy[lo][o][j - m].
  std::vector<double> wt(kh * kw * O * Cp, 0.0);
  for (std::size_t kt = 0; kt < kh; ++kt)
    for (std::size_t kl = 0; kl < kw; ++kl)
      for (std::size_t c = 0; c < C; ++c)
        for (std::size_t o = 0; o < O; ++o) wt[((kt * kw + kl) * O + o) * Cp + c] = weights_[((kt * kw + kl) * C + c) * O + o];

  Tensor grad_input(in_shape);
  const std::size_t first = g.pad_time, last = g.pad_time + g.in_time;  // padded positions of real input
  for (std::size_t li = 0; li < g.in_leads; ++li) {
    for (std::size_t c0 = 0; c0 < C; c0 += kBlock) {
      with_block(std::min(kBlock, C - c0), [&]<std::size_t NB>() {
        for (std::size_t p = 0; p < st; ++p) {
          for (std::size_t j0 = 0; j0 * st < last; j0 += kTile) {
            Tile<NB> acc;
            for (std::size_t kl = 0; kl < kw; ++kl) {
              // Output lead that reads input lead li through column kl.
              const long num = static_cast<long>(li + g.pad_lead) - static_cast<long>(kl);
              if (num < 0 || num % static_cast<long>(spec_.stride.lead) != 0) continue;
              const std::size_t lo = static_cast<std::size_t>(num) / spec_.stride.lead;
              if (lo >= g.out_leads) continue;
              for (std::size_t o = 0; o < O; ++o) {
                const double* d = dy_row(lo, o) + j0;
                for (std::size_t m = 0, kt = p; kt < kh; ++m, kt += st)
                  acc.axpy(wt.data() + ((kt * kw + kl) * O + o) * Cp + c0, d - m);
              }
            }
            for (std::size_t t = 0; t < kTile; ++t) {
              const std::size_t tp = (j0 + t) * st + p;
              if (tp < first || tp >= last) continue;
              const std::size_t ti = tp - first;
              for (std::size_t b = 0; b < NB; ++b) grad_input[(ti * g.in_leads + li) * C + c0 + b] = acc.at(b, t);
            }
          }
        }
      });
    }
  }
  return grad_input;
}

// ---------------------------------------------------------------- BiLSTM

BiLSTM::BiLSTM(LayerSpec spec) : Layer(std::move(spec)) {
  param_count(spec_);
  const std::size_t F = spec_.in_size, H = spec_.out_size;
  for (auto& d : dirs_) {
    d.w.assign(F * 4 * H, 0.0);
    d.u.assign(H * 4 * H, 0.0);
    d.b.assign(4 * H, 0.0);
    d.gw.assign(d.w.size(), 0.0);
    d.gu.assign(d.u.size(), 0.0);
    d.gb.assign(d.b.size(), 0.0);
  }
}

std::vector<ParamView> BiLSTM::params() {
  std::vector<ParamView> out;
  for (auto& d : dirs_) {
    out.push_back({d.w, d.gw});
    out.push_back({d.u, d.gu});
    out.push_back({d.b, d.gb});
  }
  return out;
}

void BiLSTM::init(Rng& rng) {
  const std::size_t H = spec_.out_size;
  const double limit = 1.0 / std::sqrt(static_cast<double>(H));
  for (auto& d : dirs_) {
    uniform_fill(d.w, rng, limit);
    uniform_fill(d.u, rng, limit);
    std::fill(d.b.begin(), d.b.end(), 0.0);
    std::fill(d.b.begin() + static_cast<long>(H), d.b.begin() + static_cast<long>(2 * H), 1.0);  // forget gate
  }
}

void BiLSTM::run_direction(std::size_t di, const Tensor& input, Tensor& output) {
  Direction& d = dirs_[di];
  const std::size_t T = input.dim(0), F = spec_.in_size, H = spec_.out_size, G = 4 * H;
  d.gates.assign(T * G, 0.0);
  d.cell.assign(T * H, 0.0);
  d.tanh_cell.assign(T * H, 0.0);
  d.hidden.assign(T * H, 0.0);
  std::vector<double> z(G);
  for (std::size_t k = 0; k < T; ++k) {
    const std::size_t t = di == 0 ? k : T - 1 - k;
    const double* x = input.data().data() + t * F;
    std::copy(d.b.begin(), d.b.end(), z.begin());
    for (std::size_t f = 0; f < F; ++f) {
      const double xf = x[f];
      const double* wr = d.w.data() + f * G;
      for (std::size_t g = 0; g < G; ++g) z[g] += xf * wr[g];
    }
    if (k > 0) {
      const double* hp = d.hidden.data() + (k - 1) * H;
      for (std::size_t j = 0; j < H; ++j) {
        const double hj = hp[j];
        const double* ur = d.u.data() + j * G;
        for (std::size_t g = 0; g < G; ++g) z[g] += hj * ur[g];
      }
    }
    double* gates = d.gates.data() + k * G;
    for (std::size_t j = 0; j < H; ++j) {
      const double i = sigmoid(z[j]);
      const double f = sigmoid(z[H + j]);
      const double g = std::tanh(z[2 * H + j]);
      const double o = sigmoid(z[3 * H + j]);
      gates[j] = i;
      gates[H + j] = f;
      gates[2 * H + j] = g;
      gates[3 * H + j] = o;
      const double c_prev = k > 0 ? d.cell[(k - 1) * H + j] : 0.0;
      const double c = f * c_prev + i * g;
      const double tc = std::tanh(c);
      d.cell[k * H + j] = c;
      d.tanh_cell[k * H + j] = tc;
      d.hidden[k * H + j] = o * tc;
      output[t * 2 * H + di * H + j] = o * tc;
    }
  }
}

Tensor BiLSTM::forward(const Tensor& input) {
  const Shape out_shape = output_shape(spec_, input.shape());
  input_ = input;
  Tensor out(out_shape);
  run_direction(0, input, out);
  run_direction(1, input, out);
  return out;
}

void BiLSTM::backprop_direction(std::size_t di, const Tensor& upstream, Tensor& grad_input, bool param_grads) {
  Direction& d = dirs_[di];
  const Tensor& input = *input_;
  const std::size_t T = input.dim(0), F = spec_.in_size, H = spec_.out_size, G = 4 * H;
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), dz(G);
  for (std::size_t kk = T; kk-- > 0;) {
    const std::size_t t = di == 0 ? kk : T - 1 - kk;
    const double* gates = d.gates.data() + kk * G;
    for (std::size_t j = 0; j < H; ++j) {
      const double i = gates[j], f = gates[H + j], g = gates[2 * H + j], o = gates[3 * H + j];
      const double tc = d.tanh_cell[kk * H + j];
      const double c_prev = kk > 0 ? d.cell[(kk - 1) * H + j] : 0.0;
      const double dh = upstream[t * 2 * H + di * H + j] + dh_next[j];
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[j];
      dz[j] = dc * g * i * (1.0 - i);
      dz[H + j] = dc * c_prev * f * (1.0 - f);
      dz[2 * H + j] = dc * i * (1.0 - g * g);
      dz[3 * H + j] = dh * tc * o * (1.0 - o);
      dc_next[j] = dc * f;
    }
    const double* x = input.data().data() + t * F;
    double* gx = grad_input.data().data() + t * F;
    for (std::size_t f = 0; f < F; ++f) {
      const double* wr = d.w.data() + f * G;
      double acc = 0.0;
      for (std::size_t g = 0; g < G; ++g) acc += wr[g] * dz[g];
      gx[f] += acc;
      if (param_grads) {
        double* gwr = d.gw.data() + f * G;
        for (std::size_t g = 0; g < G; ++g) gwr[g] += x[f] * dz[g];
      }
    }
    for (std::size_t j = 0; j < H; ++j) {
      const double* ur = d.u.data() + j * G;
      double acc = 0.0;
      for (std::size_t g = 0; g < G; ++g) acc += ur[g] * dz[g];
      dh_next[j] = acc;
    }
    if (param_grads) {
      for (std::size_t g = 0; g < G; ++g) d.gb[g] += dz[g];
      if (kk > 0) {
        const double* hp = d.hidden.data() + (kk - 1) * H;
        for (std::size_t j = 0; j < H; ++j) {
          double* gur = d.gu.data() + j * G;
          for (std::size_t g = 0; g < G; ++g) gur[g] += hp[j] * dz[g];
        }
      }
    }
  }
}

Tensor BiLSTM::backward(const Tensor& upstream, bool param_grads) {
  if (!input_) not_recorded();
  check_shape(spec_, output_shape(spec_, input_->shape()), upstream.shape(), "upstream");
  Tensor grad_input(input_->shape());
  backprop_direction(0, upstream, grad_input, param_grads);
  backprop_direction(1, upstream, grad_input, param_grads);
  return grad_input;
}

// ---------------------------------------------------------------- Dense

Dense::Dense(LayerSpec spec) : Layer(std::move(spec)) {
  param_count(spec_);
  weights_.assign(spec_.in_size * spec_.out_size, 0.0);
  bias_.assign(spec_.out_size, 0.0);
  grad_weights_.assign(weights_.size(), 0.0);
  grad_bias_.assign(bias_.size(), 0.0);
}

std::vector<ParamView> Dense::params() { return {{weights_, grad_weights_}, {bias_, grad_bias_}}; }

void Dense::init(Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(spec_.in_size + spec_.out_size));
  uniform_fill(weights_, rng, limit);
  std::fill(bias_.begin(), bias_.end(), 0.0);
}

Tensor Dense::forward(const Tensor& input) {
  const Shape out_shape = output_shape(spec_, input.shape());
  input_ = input;
  const std::size_t I = spec_.in_size, O = spec_.out_size;
  Tensor out(out_shape);
  for (std::size_t o = 0; o < O; ++o) out[o] = bias_[o];
  for (std::size_t i = 0; i < I; ++i) {
    const double x = input[i];
    const double* w = weights_.data() + i * O;
    for (std::size_t o = 0; o < O; ++o) out[o] += x * w[o];
  }
  return out;
}

Tensor Dense::backward(const Tensor& upstream, bool param_grads) {
  if (!input_) not_recorded();
  check_shape(spec_, {spec_.out_size}, upstream.shape(), "upstream");
  const std::size_t I = spec_.in_size, O = spec_.out_size;
  Tensor grad_input(input_->shape());
  for (std::size_t i = 0; i < I; ++i) {
    const double* w = weights_.data() + i * O;
    double acc = 0.0;
    for (std::size_t o = 0; o < O; ++o) acc += w[o] * upstream[o];
    grad_input[i] = acc;
    if (param_grads) {
      const double x = (*input_)[i];
      double* gw = grad_weights_.data() + i * O;
      for (std::size_t o = 0; o < O; ++o) gw[o] += x * upstream[o];
    }
  }
  if (param_grads)
    for (std::size_t o = 0; o < O; ++o) grad_bias_[o] += upstream[o];
  return grad_input;
}

// ---------------------------------------------------------------- activations

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& input) {
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = sigmoid(input[i]);
  return out;
}

Tensor leaky_relu(const Tensor& input, double alpha) {
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] >= 0.0 ? input[i] : alpha * input[i];
  return out;
}

Tensor LeakyReLU::forward(const Tensor& input) {
  input_ = input;
  return leaky_relu(input, spec_.alpha);
}

Tensor LeakyReLU::backward(const Tensor& upstream, bool) {
  if (!input_) not_recorded();
  check_shape(spec_, input_->shape(), upstream.shape(), "upstream");
  Tensor g(upstream.shape());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = (*input_)[i] >= 0.0 ? upstream[i] : spec_.alpha * upstream[i];
  return g;
}

Tensor Sigmoid::forward(const Tensor& input) {
  output_ = sigmoid(input);
  return *output_;
}

Tensor Sigmoid::backward(const Tensor& upstream, bool) {
  if (!output_) not_recorded();
  check_shape(spec_, output_->shape(), upstream.shape(), "upstream");
  Tensor g(upstream.shape());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = (*output_)[i];
    g[i] = upstream[i] * s * (1.0 - s);
  }
  return g;
}

Tensor Reshape::forward(const Tensor& input) {
  const Shape out_shape = output_shape(spec_, input.shape());
  input_shape_ = input.shape();
  return input.reshaped(out_shape);
}

Tensor Reshape::backward(const Tensor& upstream, bool) {
  if (!input_shape_) not_recorded();
  check_shape(spec_, spec_.target_shape, upstream.shape(), "upstream");
  return upstream.reshaped(*input_shape_);
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec) {
  switch (spec.kind) {
    case LayerKind::Conv2D: return std::make_unique<Conv2D>(spec);
    case LayerKind::BiLSTM: return std::make_unique<BiLSTM>(spec);
    case LayerKind::Dense: return std::make_unique<Dense>(spec);
    case LayerKind::LeakyReLU: return std::make_unique<LeakyReLU>(spec);
    case LayerKind::Sigmoid: return std::make_unique<Sigmoid>(spec);
    case LayerKind::Reshape: return std::make_unique<Reshape>(spec);
  }
  throw Error(ErrorCode::UnsupportedLayer, spec.name);
}

}  // namespace ecggan::nn
