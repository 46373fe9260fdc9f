#include "phcert/tabulated_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "phcert/errors.hpp"

namespace phcert {

namespace {

// Fornberg's recursion: weights for the first and second derivative at x0 on nodes xs.
template <std::size_t K>
std::array<std::array<double, K>, 2> derivative_weights(double x0, const std::array<double, K>& xs) {
  double c[K][3] = {};
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  for (std::size_t i = 1; i < K; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 2);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::array<std::array<double, K>, 2> w{};
  for (std::size_t i = 0; i < K; ++i) {
    w[0][i] = c[i][1];
    w[1][i] = c[i][2];
  }
  return w;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), d_(x_.size(), 0.0), s_(x_.size(), 0.0),
      c_(x_.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n < 5 || y_.size() != n) throw InvalidInput("monotone cubic needs >= 5 matching nodes");

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = std::min(i < 2 ? 0 : i - 2, n - 5);
    std::array<double, 5> xs{};
    for (std::size_t k = 0; k < 5; ++k) xs[k] = x_[lo + k];
    const auto w = derivative_weights(x_[i], xs);
    for (std::size_t k = 0; k < 5; ++k) {
      s_[i] += w[0][k] * y_[lo + k];
      c_[i] += w[1][k] * y_[lo + k];
    }
  }
  d_ = s_;

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double delta = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
    if (delta == 0.0) {
      d_[k] = 0.0;
      d_[k + 1] = 0.0;
      continue;
    }
    double a = d_[k] / delta;
    double b = d_[k + 1] / delta;
    if (a < 0.0) {
      d_[k] = 0.0;
      a = 0.0;
    }
    if (b < 0.0) {
      d_[k + 1] = 0.0;
      b = 0.0;
    }
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      d_[k] = tau * a * delta;
      d_[k + 1] = tau * b * delta;
    }
  }
}

MonotoneCubic::Value MonotoneCubic::operator()(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  k = std::min(k, x_.size() - 2);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double y0 = y_[k], y1 = y_[k + 1], m0 = d_[k] * h, m1 = d_[k + 1] * h;

  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double dh00 = 6 * t2 - 6 * t, dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = -6 * t2 + 6 * t, dh11 = 3 * t2 - 2 * t;

  // Derivatives interpolate the unlimited node slopes and curvatures instead.
  const double s0 = s_[k], s1 = s_[k + 1], n0 = c_[k] * h, n1 = c_[k + 1] * h;
  Value v;
  v.y = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
  v.dy = h00 * s0 + h10 * n0 + h01 * s1 + h11 * n1;
  v.d2y = (dh00 * s0 + dh10 * n0 + dh01 * s1 + dh11 * n1) / h;
  return v;
}

void validate_table(const ProfileTable& t) {
  const std::size_t n = t.r.size();
  if (t.f.size() != n || t.N.size() != n || t.phi.size() != n) {
    throw DataError("profile table columns have different lengths");
  }
  if (n < kMinTableRows) {
    throw DataError("profile table has " + std::to_string(n) + " rows; at least " +
                    std::to_string(kMinTableRows) + " are required");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(t.r[i]) || !std::isfinite(t.f[i]) || !std::isfinite(t.N[i]) ||
        !std::isfinite(t.phi[i])) {
      throw DataError("non-finite entry in profile table row " + std::to_string(i));
    }
    if (i > 0 && !(t.r[i] > t.r[i - 1])) {
      throw DataError("profile radii not strictly increasing at row " + std::to_string(i));
    }
  }
  if (!(t.r.front() > 0.0)) throw DataError("profile radii must be positive");
}

RadialProfile make_tabulated_profile(const ProfileTable& t, std::string label) {
  validate_table(t);
  struct Interpolants {
    MonotoneCubic f, N, phi;
  };
  auto interp = std::make_shared<Interpolants>(
      Interpolants{MonotoneCubic(t.r, t.f), MonotoneCubic(t.r, t.N), MonotoneCubic(t.r, t.phi)});
  return RadialProfile(
      t.r.front(), t.r.back(), ProfileKind::tabulated,
      [interp](double r) {
        const auto f = interp->f(r);
        const auto N = interp->N(r);
        const auto p = interp->phi(r);
        RadialSample s;
        s.r = r;
        s.f = f.y, s.df = f.dy, s.d2f = f.d2y;
        s.N = N.y, s.dN = N.dy, s.d2N = N.d2y;
        s.phi = p.y, s.dphi = p.dy, s.d2phi = p.d2y;
        return s;
      },
      std::move(label), t.r.front());
}

ProfileTable sample_profile(const RadialProfile& p, std::span<const double> radii) {
  ProfileTable t;
  for (double r : radii) {
    const auto s = p.at(r);
    t.r.push_back(r);
    t.f.push_back(s.f);
    t.N.push_back(s.N);
    t.phi.push_back(s.phi);
  }
  return t;
}

ProfileTable parse_profile_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, "empty profile file");

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return cells;
  };

  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = header[i];
    if (name == "Φ" || name == "phi") name = "Phi";
    col[name] = i;
  }
  for (const char* required : {"r", "f", "N", "Phi"}) {
    if (!col.count(required)) {
      const std::string shown = std::string(required) == "Phi" ? "Φ (Phi)" : required;
      throw ParseError(source + "/columns", "missing column " + shown);
    }
  }

  ProfileTable t;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    auto get = [&](const char* name) {
      const std::size_t i = col.at(name);
      if (i >= cells.size()) {
        throw ParseError(source + "/row " + std::to_string(row), std::string("missing ") + name);
      }
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[i], &used);
        if (used != cells[i].size()) throw std::invalid_argument("trailing characters");
        return v;
      } catch (const std::exception&) {
        throw ParseError(source + "/row " + std::to_string(row),
                         std::string("bad number in column ") + name);
      }
    };
    t.r.push_back(get("r"));
    t.f.push_back(get("f"));
    t.N.push_back(get("N"));
    t.phi.push_back(get("Phi"));
  }
  return t;
}

ProfileTable read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile file " + path.string());
  return parse_profile_csv(in, path.string());
}

void write_profile_csv(std::ostream& out, const ProfileTable& t) {
  out << "r,f,N,Phi\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << t.r[i] << ',' << t.f[i] << ',' << t.N[i] << ',' << t.phi[i] << '\n';
  }
}

}  // namespace phcert
