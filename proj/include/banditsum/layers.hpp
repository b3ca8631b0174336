#ifndef BANDITSUM_LAYERS_HPP
#define BANDITSUM_LAYERS_HPP

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

#include "banditsum/params.hpp"

// Building blocks with hand-written backward passes. A layer only records
// where its weights live inside a ParamVector; forward reads the flat
// parameter vector and backward accumulates into a flat gradient of the
// same layout. Matrices are stored column-major.
namespace banditsum::model::layers {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class Embedding {
 public:
  Embedding() = default;
  Embedding(ParamVector& params, const std::string& name, std::size_t rows, std::size_t dim);

  Eigen::Map<const VectorXd> row(const VectorXd& params, std::size_t id) const;
  void accumulate(VectorXd& grad, std::size_t id, const VectorXd& d_row) const;

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  const std::string& segment_name() const { return name_; }

 private:
  std::string name_;
  std::size_t offset_ = 0;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
};

/// y = W x + b
class Linear {
 public:
  Linear() = default;
  Linear(ParamVector& params, const std::string& name, std::size_t in, std::size_t out);

  VectorXd forward(const VectorXd& params, const VectorXd& x) const;
  /// Accumulates dW and db; returns dL/dx.
  VectorXd backward(const VectorXd& params, VectorXd& grad, const VectorXd& x,
                    const VectorXd& dy) const;

  std::size_t in() const { return in_; }
  std::size_t out() const { return out_; }

 private:
  std::size_t w_offset_ = 0;
  std::size_t b_offset_ = 0;
  std::size_t in_ = 0;
  std::size_t out_ = 0;
};

/// Activations of one LSTM pass over a sequence, kept for backprop.
struct LstmCache {
  MatrixXd inputs;       // in x T
  MatrixXd hidden;       // H x (T + 1), column 0 is the zero initial state
  MatrixXd cell;         // H x (T + 1)
  MatrixXd input_gate;   // H x T
  MatrixXd forget_gate;  // H x T
  MatrixXd candidate;    // H x T
  MatrixXd output_gate;  // H x T
  MatrixXd cell_tanh;    // H x T
};

/// Standard LSTM cell with gate order (input, forget, candidate, output):
///   z = W x_t + U h_{t-1} + b
///   c_t = f * c_{t-1} + i * g,  h_t = o * tanh(c_t)
class Lstm {
 public:
  Lstm() = default;
  Lstm(ParamVector& params, const std::string& name, std::size_t in, std::size_t hidden);

  /// Columns of `inputs` are time steps; returns hidden states as columns.
  MatrixXd forward(const VectorXd& params, const MatrixXd& inputs, LstmCache& cache) const;
  /// `d_hidden` holds dL/dh_t per column; returns dL/dx_t per column.
  MatrixXd backward(const VectorXd& params, VectorXd& grad, const LstmCache& cache,
                    const MatrixXd& d_hidden) const;

  std::size_t hidden() const { return hidden_; }
  const std::string& bias_segment() const { return bias_name_; }

 private:
  std::size_t w_offset_ = 0;
  std::size_t u_offset_ = 0;
  std::size_t b_offset_ = 0;
  std::size_t in_ = 0;
  std::size_t hidden_ = 0;
  std::string bias_name_;
};

struct BiLstmCache {
  LstmCache forward;
  LstmCache backward;
};

/// Forward and reversed LSTM; output column t is [h_fwd_t; h_bwd_t].
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(ParamVector& params, const std::string& name, std::size_t in, std::size_t hidden);

  MatrixXd forward(const VectorXd& params, const MatrixXd& inputs, BiLstmCache& cache) const;
  MatrixXd backward(const VectorXd& params, VectorXd& grad, const BiLstmCache& cache,
                    const MatrixXd& d_output) const;

  std::size_t output_dim() const { return 2 * fwd_.hidden(); }
  const Lstm& forward_cell() const { return fwd_; }
  const Lstm& backward_cell() const { return bwd_; }

 private:
  Lstm fwd_;
  Lstm bwd_;
};

double sigmoid(double x);

}  // namespace banditsum::model::layers

#endif  // BANDITSUM_LAYERS_HPP
