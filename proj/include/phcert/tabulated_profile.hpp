#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "phcert/radial_profile.hpp"

namespace phcert {

/// Column-major samples of (f, N, Phi) at strictly increasing radii.
struct ProfileTable {
  std::vector<double> r, f, N, phi;
  std::size_t size() const noexcept { return r.size(); }
};

inline constexpr std::size_t kMinTableRows = 50;

/// Piecewise cubic Hermite interpolant with fourth-order finite-difference
/// node slopes, limited with the Fritsch-Carlson conditions so monotone data
/// stays monotone. The returned derivatives come from a second Hermite
/// interpolant of the unlimited five-point node slopes and curvatures, so
/// the second derivative is continuous.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  struct Value {
    double y, dy, d2y;
  };
  Value operator()(double x) const;

 private:
  std::vector<double> x_, y_, d_, s_, c_;
};

/// Throws DataError for fewer than kMinTableRows rows, non-finite entries or
/// radii that are not strictly increasing.
void validate_table(const ProfileTable& t);

RadialProfile make_tabulated_profile(const ProfileTable& t, std::string label = "tabulated");

ProfileTable sample_profile(const RadialProfile& p, std::span<const double> radii);

/// CSV with header naming the columns r, f, N and Phi (or "Φ"), any order.
ProfileTable read_profile_csv(const std::filesystem::path& path);
ProfileTable parse_profile_csv(std::istream& in, const std::string& source = "<stream>");
void write_profile_csv(std::ostream& out, const ProfileTable& t);

}  // namespace phcert
