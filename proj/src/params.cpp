#include "banditsum/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace banditsum::model {

std::size_t ParamVector::add_segment(std::string name, std::size_t length) {
  if (has_segment(name)) throw std::invalid_argument("duplicate parameter segment: " + name);
  const std::size_t offset = size();
  segments_.push_back(Segment{std::move(name), offset, length, true});
  values_.conservativeResize(static_cast<Eigen::Index>(offset + length));
  values_.tail(static_cast<Eigen::Index>(length)).setZero();
  return offset;
}

const Segment& ParamVector::segment(std::string_view name) const {
  auto it = std::find_if(segments_.begin(), segments_.end(),
                         [name](const Segment& s) { return s.name == name; });
  if (it == segments_.end()) throw std::out_of_range("unknown parameter segment: " + std::string(name));
  return *it;
}

bool ParamVector::has_segment(std::string_view name) const {
  return std::any_of(segments_.begin(), segments_.end(),
                     [name](const Segment& s) { return s.name == name; });
}

void ParamVector::set_trainable(std::string_view name, bool trainable) {
  const Segment& s = segment(name);
  segments_[static_cast<std::size_t>(&s - segments_.data())].trainable = trainable;
}

std::span<double> ParamVector::view(std::string_view name) {
  const Segment& s = segment(name);
  return {values_.data() + s.offset, s.length};
}

std::span<const double> ParamVector::view(std::string_view name) const {
  const Segment& s = segment(name);
  return {values_.data() + s.offset, s.length};
}

GradVector GradVector::zeros_like(const ParamVector& params) {
  return GradVector{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.size()))};
}

}  // namespace banditsum::model
