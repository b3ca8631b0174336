#include "banditsum/layers.hpp"

#include <cmath>

namespace banditsum::model::layers {

namespace {

using Eigen::Index;

Eigen::Map<const MatrixXd> matrix(const VectorXd& v, std::size_t offset, std::size_t rows,
                                  std::size_t cols) {
  return {v.data() + offset, static_cast<Index>(rows), static_cast<Index>(cols)};
}

Eigen::Map<MatrixXd> matrix(VectorXd& v, std::size_t offset, std::size_t rows, std::size_t cols) {
  return {v.data() + offset, static_cast<Index>(rows), static_cast<Index>(cols)};
}

Eigen::Map<const VectorXd> vector(const VectorXd& v, std::size_t offset, std::size_t len) {
  return {v.data() + offset, static_cast<Index>(len)};
}

Eigen::Map<VectorXd> vector(VectorXd& v, std::size_t offset, std::size_t len) {
  return {v.data() + offset, static_cast<Index>(len)};
}

VectorXd logistic(const VectorXd& z) {
  return z.unaryExpr([](double x) { return sigmoid(x); });
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Embedding::Embedding(ParamVector& params, const std::string& name, std::size_t rows,
                     std::size_t dim)
    : name_(name), offset_(params.add_segment(name, rows * dim)), rows_(rows), dim_(dim) {}

Eigen::Map<const VectorXd> Embedding::row(const VectorXd& params, std::size_t id) const {
  return vector(params, offset_ + id * dim_, dim_);
}

void Embedding::accumulate(VectorXd& grad, std::size_t id, const VectorXd& d_row) const {
  vector(grad, offset_ + id * dim_, dim_) += d_row;
}

Linear::Linear(ParamVector& params, const std::string& name, std::size_t in, std::size_t out)
    : w_offset_(params.add_segment(name + ".W", in * out)),
      b_offset_(params.add_segment(name + ".b", out)),
      in_(in),
      out_(out) {}

VectorXd Linear::forward(const VectorXd& params, const VectorXd& x) const {
  return matrix(params, w_offset_, out_, in_) * x + vector(params, b_offset_, out_);
}

VectorXd Linear::backward(const VectorXd& params, VectorXd& grad, const VectorXd& x,
                          const VectorXd& dy) const {
  matrix(grad, w_offset_, out_, in_).noalias() += dy * x.transpose();
  vector(grad, b_offset_, out_) += dy;
  return matrix(params, w_offset_, out_, in_).transpose() * dy;
}

Lstm::Lstm(ParamVector& params, const std::string& name, std::size_t in, std::size_t hidden)
    : w_offset_(params.add_segment(name + ".W", 4 * hidden * in)),
      u_offset_(params.add_segment(name + ".U", 4 * hidden * hidden)),
      b_offset_(params.add_segment(name + ".b", 4 * hidden)),
      in_(in),
      hidden_(hidden),
      bias_name_(name + ".b") {}

MatrixXd Lstm::forward(const VectorXd& params, const MatrixXd& inputs, LstmCache& cache) const {
  const Index h = static_cast<Index>(hidden_);
  const Index steps = inputs.cols();
  const auto w = matrix(params, w_offset_, 4 * hidden_, in_);
  const auto u = matrix(params, u_offset_, 4 * hidden_, hidden_);
  const auto b = vector(params, b_offset_, 4 * hidden_);

  cache.inputs = inputs;
  cache.hidden = MatrixXd::Zero(h, steps + 1);
  cache.cell = MatrixXd::Zero(h, steps + 1);
  cache.input_gate.resize(h, steps);
  cache.forget_gate.resize(h, steps);
  cache.candidate.resize(h, steps);
  cache.output_gate.resize(h, steps);
  cache.cell_tanh.resize(h, steps);

  for (Index t = 0; t < steps; ++t) {
    const VectorXd z = w * inputs.col(t) + u * cache.hidden.col(t) + b;
    cache.input_gate.col(t) = logistic(z.segment(0, h));
    cache.forget_gate.col(t) = logistic(z.segment(h, h));
    cache.candidate.col(t) = z.segment(2 * h, h).array().tanh();
    cache.output_gate.col(t) = logistic(z.segment(3 * h, h));
    cache.cell.col(t + 1) = cache.forget_gate.col(t).cwiseProduct(cache.cell.col(t)) +
                            cache.input_gate.col(t).cwiseProduct(cache.candidate.col(t));
    cache.cell_tanh.col(t) = cache.cell.col(t + 1).array().tanh();
    cache.hidden.col(t + 1) = cache.output_gate.col(t).cwiseProduct(cache.cell_tanh.col(t));
  }
  return cache.hidden.rightCols(steps);
}

MatrixXd Lstm::backward(const VectorXd& params, VectorXd& grad, const LstmCache& cache,
                        const MatrixXd& d_hidden) const {
  const Index h = static_cast<Index>(hidden_);
  const Index steps = cache.inputs.cols();
  const auto w = matrix(params, w_offset_, 4 * hidden_, in_);
  const auto u = matrix(params, u_offset_, 4 * hidden_, hidden_);
  auto dw = matrix(grad, w_offset_, 4 * hidden_, in_);
  auto du = matrix(grad, u_offset_, 4 * hidden_, hidden_);
  auto db = vector(grad, b_offset_, 4 * hidden_);

  MatrixXd d_inputs(static_cast<Index>(in_), steps);
  VectorXd dh_next = VectorXd::Zero(h);
  VectorXd dc_next = VectorXd::Zero(h);
  VectorXd dz(4 * h);
  for (Index t = steps - 1; t >= 0; --t) {
    const auto i = cache.input_gate.col(t).array();
    const auto f = cache.forget_gate.col(t).array();
    const auto g = cache.candidate.col(t).array();
    const auto o = cache.output_gate.col(t).array();
    const auto tc = cache.cell_tanh.col(t).array();

    const VectorXd dh = d_hidden.col(t) + dh_next;
    const Eigen::ArrayXd dc = dc_next.array() + dh.array() * o * (1.0 - tc * tc);
    dz.segment(0, h) = (dc * g * i * (1.0 - i)).matrix();
    dz.segment(h, h) = (dc * cache.cell.col(t).array() * f * (1.0 - f)).matrix();
    dz.segment(2 * h, h) = (dc * i * (1.0 - g * g)).matrix();
    dz.segment(3 * h, h) = (dh.array() * tc * o * (1.0 - o)).matrix();
    dc_next = (dc * f).matrix();

    dw.noalias() += dz * cache.inputs.col(t).transpose();
    du.noalias() += dz * cache.hidden.col(t).transpose();
    db += dz;
    d_inputs.col(t) = w.transpose() * dz;
    dh_next = u.transpose() * dz;
  }
  return d_inputs;
}

BiLstm::BiLstm(ParamVector& params, const std::string& name, std::size_t in, std::size_t hidden)
    : fwd_(params, name + ".fwd", in, hidden), bwd_(params, name + ".bwd", in, hidden) {}

MatrixXd BiLstm::forward(const VectorXd& params, const MatrixXd& inputs, BiLstmCache& cache) const {
  const Index h = static_cast<Index>(fwd_.hidden());
  const MatrixXd reversed = inputs.rowwise().reverse();
  MatrixXd out(2 * h, inputs.cols());
  out.topRows(h) = fwd_.forward(params, inputs, cache.forward);
  out.bottomRows(h) = bwd_.forward(params, reversed, cache.backward).rowwise().reverse();
  return out;
}

MatrixXd BiLstm::backward(const VectorXd& params, VectorXd& grad, const BiLstmCache& cache,
                          const MatrixXd& d_output) const {
  const Index h = static_cast<Index>(fwd_.hidden());
  MatrixXd d_inputs = fwd_.backward(params, grad, cache.forward, d_output.topRows(h));
  const MatrixXd d_rev = d_output.bottomRows(h).rowwise().reverse();
  d_inputs += bwd_.backward(params, grad, cache.backward, d_rev).rowwise().reverse();
  return d_inputs;
}

}  // namespace banditsum::model::layers
