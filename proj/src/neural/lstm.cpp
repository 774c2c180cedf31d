#include "pdl/neural/lstm.hpp"

#include <algorithm>
#include <cmath>

#include "pdl/rng.hpp"
#include "pdl/simd/kernels.hpp"

namespace pdl::neural {

LstmParameters LstmParameters::initialized(LstmShape shape, std::uint64_t seed) {
  LstmParameters p(shape);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(shape.h, 1)));
  auto fill = [&](double* first, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) first[i] = rng.uniform(-scale, scale);
  };
  fill(p.W(), 4 * shape.h * shape.d);
  fill(p.U(), 4 * shape.h * shape.h);
  std::fill(p.b() + shape.h, p.b() + 2 * shape.h, 1.0);
  fill(p.V(), shape.n * shape.h);
  return p;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_shapes(const LstmParameters& params, const EncodedSequence& seq, const Matrix* mask) {
  const auto& s = params.shape();
  if (seq.inputs.cols != s.d || seq.targets.cols != s.n) {
    throw PreconditionError("sequence shape does not match parameters");
  }
  if (seq.steps > seq.inputs.rows) throw PreconditionError("sequence has more steps than rows");
  if (mask != nullptr && (mask->rows < seq.steps || mask->cols != s.h)) {
    throw PreconditionError("dropout mask shape does not match");
  }
}

}  // namespace

ForwardTrace lstm_forward(const LstmParameters& params, const EncodedSequence& seq, const Matrix* dropout_mask) {
  check_shapes(params, seq, dropout_mask);
  const auto& k = simd::active();
  const auto [d, h, n] = params.shape();
  const std::size_t T = seq.steps;

  ForwardTrace f;
  f.steps = T;
  f.gates.assign(T * 4 * h, 0.0);
  f.cell.assign(T * h, 0.0);
  f.hidden.assign(T * h, 0.0);
  f.head_in.assign(T * h, 0.0);
  f.probs = Matrix(T, n);

  std::vector<double> zero(h, 0.0);
  std::vector<double> logits(n);
  for (std::size_t t = 0; t < T; ++t) {
    const double* h_prev = t == 0 ? zero.data() : &f.hidden[(t - 1) * h];
    const double* c_prev = t == 0 ? zero.data() : &f.cell[(t - 1) * h];
    double* z = &f.gates[t * 4 * h];
    std::copy(params.b(), params.b() + 4 * h, z);
    k.gemv(params.W(), 4 * h, d, seq.inputs.row(t), z);
    k.gemv(params.U(), 4 * h, h, h_prev, z);
    double* c = &f.cell[t * h];
    double* hs = &f.hidden[t * h];
    double* hd = &f.head_in[t * h];
    for (std::size_t j = 0; j < h; ++j) {
      z[j] = sigmoid(z[j]);
      z[h + j] = sigmoid(z[h + j]);
      z[2 * h + j] = sigmoid(z[2 * h + j]);
      z[3 * h + j] = std::tanh(z[3 * h + j]);
      c[j] = z[h + j] * c_prev[j] + z[j] * z[3 * h + j];
      hs[j] = z[2 * h + j] * std::tanh(c[j]);
      hd[j] = dropout_mask != nullptr ? hs[j] * dropout_mask->at(t, j) : hs[j];
    }
    std::copy(params.c(), params.c() + n, logits.begin());
    k.gemv(params.V(), n, h, hd, logits.data());
    const double top = *std::max_element(logits.begin(), logits.end());
    if (!std::isfinite(top)) throw NumericError("non-finite activation", t);
    double sum = 0.0;
    double* p = f.probs.row(t);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = std::exp(logits[i] - top);
      sum += p[i];
    }
    for (std::size_t i = 0; i < n; ++i) p[i] /= sum;
  }
  return f;
}

double sequence_loss(const ForwardTrace& fwd, const EncodedSequence& seq) {
  if (seq.labels.empty()) return 0.0;
  double loss = 0.0;
  for (std::size_t t = 0; t < seq.labels.size(); ++t) loss -= std::log(fwd.probs.at(t, seq.labels[t]));
  return loss / static_cast<double>(seq.labels.size());
}

double loss_and_gradient(const LstmParameters& params, const EncodedSequence& seq, LstmParameters& grad,
                         const Matrix* dropout_mask) {
  if (!(grad.shape() == params.shape())) throw PreconditionError("gradient shape does not match parameters");
  const auto fwd = lstm_forward(params, seq, dropout_mask);
  const std::size_t targets = seq.labels.size();
  if (targets == 0) return 0.0;
  const auto& k = simd::active();
  const auto [d, h, n] = params.shape();
  const double scale = 1.0 / static_cast<double>(targets);

  std::vector<double> zero(h, 0.0);
  std::vector<double> dlogits(n);
  std::vector<double> dh(h);
  std::vector<double> dh_next(h, 0.0);
  std::vector<double> dc_next(h, 0.0);
  std::vector<double> dz(4 * h);

  // Steps at or after the last target do not influence the loss.
  for (std::size_t t = targets; t-- > 0;) {
    const double* p = fwd.probs.row(t);
    for (std::size_t i = 0; i < n; ++i) dlogits[i] = p[i] * scale;
    dlogits[seq.labels[t]] -= scale;

    const double* hd = &fwd.head_in[t * h];
    k.ger(grad.V(), n, h, dlogits.data(), hd);
    k.axpy(1.0, dlogits.data(), grad.c(), n);

    std::fill(dh.begin(), dh.end(), 0.0);
    k.gemv_t(params.V(), n, h, dlogits.data(), dh.data());
    if (dropout_mask != nullptr) {
      for (std::size_t j = 0; j < h; ++j) dh[j] *= dropout_mask->at(t, j);
    }
    const double* g = &fwd.gates[t * 4 * h];
    const double* c = &fwd.cell[t * h];
    const double* c_prev = t == 0 ? zero.data() : &fwd.cell[(t - 1) * h];
    for (std::size_t j = 0; j < h; ++j) {
      const double dhj = dh[j] + dh_next[j];
      const double tc = std::tanh(c[j]);
      const double i = g[j], f = g[h + j], o = g[2 * h + j], cand = g[3 * h + j];
      const double dc = dhj * o * (1.0 - tc * tc) + dc_next[j];
      dz[j] = dc * cand * i * (1.0 - i);
      dz[h + j] = dc * c_prev[j] * f * (1.0 - f);
      dz[2 * h + j] = dhj * tc * o * (1.0 - o);
      dz[3 * h + j] = dc * i * (1.0 - cand * cand);
      dc_next[j] = dc * f;
    }
    const double* h_prev = t == 0 ? zero.data() : &fwd.hidden[(t - 1) * h];
    k.ger(grad.W(), 4 * h, d, dz.data(), seq.inputs.row(t));
    k.ger(grad.U(), 4 * h, h, dz.data(), h_prev);
    k.axpy(1.0, dz.data(), grad.b(), 4 * h);
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    k.gemv_t(params.U(), 4 * h, h, dz.data(), dh_next.data());
  }
  return sequence_loss(fwd, seq);
}

std::size_t predict(const Matrix& probs, std::size_t step) {
  const double* row = probs.row(step);
  return static_cast<std::size_t>(std::max_element(row, row + probs.cols) - row);
}

void Adam::step(LstmParameters& params, const LstmParameters& grad) {
  ++t_;
  simd::AdamStep s;
  s.lr = cfg_.lr;
  s.beta1 = cfg_.beta1;
  s.beta2 = cfg_.beta2;
  s.epsilon = cfg_.epsilon;
  s.correction1 = 1.0 / (1.0 - std::pow(cfg_.beta1, static_cast<double>(t_)));
  s.correction2 = 1.0 / (1.0 - std::pow(cfg_.beta2, static_cast<double>(t_)));
  simd::active().adam(params.data().data(), grad.data().data(), m_.data(), v_.data(), params.data().size(), s);
}

}  // namespace pdl::neural
