#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geoinf/measure.hpp"
#include "geoinf/monte_carlo.hpp"
#include "geoinf/set_model.hpp"

namespace geoinf {

struct InfluenceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t coordinate = 0;
};

/// A function h: [0, 1] -> [0, inf) applied to fiber measures.
class HProfile {
 public:
  using Fn = std::function<double(double)>;

  /// Ent(t) = -t log t - (1 - t) log(1 - t).
  static HProfile entropy();
  /// t (1 - t).
  static HProfile variance();
  /// t -> density(quantile(t)) of m; h(0) = h(1) = 0.
  static HProfile iso_profile(const Measure1D& m);
  static HProfile scaled(const HProfile& base, double factor);
  static HProfile custom(std::string name, Fn fn);

  const std::string& name() const noexcept { return name_; }
  double operator()(double t) const { return fn_(t); }

 private:
  HProfile(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name_;
  Fn fn_;
};

double entropy(double x);
/// Inverse of Ent restricted to [0, 1/2]; bisection to 1e-12.
double entropy_inverse(double y);
/// y / (-2 log y) for 0 < y <= 1/2.
double theta(double y);

/// Lower bound (1/2) δ I_ent on the h-influence, where δ is the infimum of
/// h / Ent over [theta(I_ent / 2), 1 - theta(I_ent / 2)].
/// The infimum is taken on a 10^4-point grid that is geometric towards both
/// endpoints, followed by golden-section refinement around the best cell.
double ent_to_h_bound(const HProfile& h, double i_ent);
/// The δ used by ent_to_h_bound.
double ent_to_h_delta(const HProfile& h, double i_ent);

InfluenceEstimate geometric_influence(const SetDescriptor& a, const ProductSpace& space, std::size_t i,
                                      const McConfig& cfg);
InfluenceEstimate h_influence(const SetDescriptor& a, const ProductSpace& space, const HProfile& h,
                              std::size_t i, const McConfig& cfg);

struct InfluenceProfile {
  std::vector<InfluenceEstimate> coords;
  Estimate sum;
  double max = 0.0;
  std::size_t argmax = 0;

  std::vector<double> values() const;
};

/// Geometric influences of every coordinate on one shared sample batch.
InfluenceProfile influence_profile(const SetDescriptor& a, const ProductSpace& space, const McConfig& cfg);
/// h-influences of every coordinate on one shared sample batch.
InfluenceProfile h_profile(const SetDescriptor& a, const ProductSpace& space, const HProfile& h,
                           const McConfig& cfg);

/// Geometric and h-influence of each coordinate from the same samples, with
/// the standard error of their per-sample difference.
struct PairedInfluence {
  InfluenceEstimate geometric;
  InfluenceEstimate h;
  double difference = 0.0;
  double difference_std_error = 0.0;
};
std::vector<PairedInfluence> paired_influences(const SetDescriptor& a, const ProductSpace& space,
                                               const HProfile& h, const McConfig& cfg);

}  // namespace geoinf
