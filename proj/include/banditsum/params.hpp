#ifndef BANDITSUM_PARAMS_HPP
#define BANDITSUM_PARAMS_HPP

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace banditsum::model {

/// A named slice of a flat parameter vector.
struct Segment {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;
  bool trainable = true;
};

/// Flat parameter vector plus the segment table describing its layout.
/// Segments are appended contiguously, so the table always covers the
/// vector exactly.
class ParamVector {
 public:
  /// Appends a zero-filled segment and returns its offset.
  std::size_t add_segment(std::string name, std::size_t length);

  const std::vector<Segment>& segments() const { return segments_; }
  const Segment& segment(std::string_view name) const;
  bool has_segment(std::string_view name) const;
  void set_trainable(std::string_view name, bool trainable);

  std::span<double> view(std::string_view name);
  std::span<const double> view(std::string_view name) const;

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

 private:
  std::vector<Segment> segments_;
  Eigen::VectorXd values_;
};

/// Gradient with the same layout as the ParamVector it was computed for.
struct GradVector {
  Eigen::VectorXd values;

  static GradVector zeros_like(const ParamVector& params);
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

}  // namespace banditsum::model

#endif  // BANDITSUM_PARAMS_HPP
