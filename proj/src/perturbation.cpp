#include "ckn/perturbation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ckn/csv.hpp"

namespace ckn {

namespace {

double parse_number(std::string_view text, const std::string& context) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    throw std::invalid_argument("perturbation '" + context + "': '" + std::string(text) +
                                "' is not a finite number");
  }
  return value;
}

std::vector<double> parse_args(const std::string& args, std::size_t expected, const std::string& context) {
  const auto fields = split(args, ',');
  if (fields.size() != expected) {
    throw std::invalid_argument("perturbation '" + context + "': expected " + std::to_string(expected) +
                                " comma-separated numbers");
  }
  std::vector<double> out;
  for (const auto& f : fields) out.push_back(parse_number(f, context));
  return out;
}

// Fritsch-Carlson slopes for a monotone piecewise cubic Hermite interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return d;
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  const auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) {
      s = 0.0;
    } else if (d0 * d1 <= 0.0 && std::fabs(s) > 3.0 * std::fabs(d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

}  // namespace

Perturbation Perturbation::gaussian_bump(double c, double t0, double s) {
  if (!(s > 0.0) || !std::isfinite(c) || !std::isfinite(t0) || !std::isfinite(s)) {
    throw std::invalid_argument("gaussian-bump: need finite c, t0 and s > 0");
  }
  Perturbation k;
  k.kind_ = Kind::GaussianBump;
  k.args_ = {c, t0, s};
  k.k0_ = 0.0;
  k.kinf_ = 0.0;
  k.laplacian0_ = 0.0;
  k.spec_ = "gaussian-bump:" + format_real(c) + "," + format_real(t0) + "," + format_real(s);
  return k;
}

Perturbation Perturbation::rational(double alpha, double beta, int N) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("rational: coefficients must be finite");
  }
  Perturbation k;
  k.kind_ = Kind::Rational;
  k.args_ = {alpha, beta};
  k.k0_ = alpha;
  k.kinf_ = 0.0;
  k.laplacian0_ = 2.0 * N * (beta - 2.0 * alpha);
  k.spec_ = "rational:" + format_real(alpha) + "," + format_real(beta);
  return k;
}

Perturbation Perturbation::tabulated(std::vector<double> r, std::vector<double> values, double k0,
                                     double kinf, std::optional<double> laplacian0,
                                     std::string source) {
  if (r.size() != values.size() || r.size() < 2) {
    throw std::invalid_argument("tabulated: need at least two (r, k) pairs");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(values[i]) || r[i] < 0.0) {
      throw std::invalid_argument("tabulated: entries must be finite with r >= 0");
    }
    if (i > 0 && !(r[i] > r[i - 1])) throw std::invalid_argument("tabulated: r must be strictly increasing");
  }
  Perturbation k;
  k.kind_ = Kind::Tabulated;
  k.slope_ = pchip_slopes(r, values);
  k.r_ = std::move(r);
  k.k_ = std::move(values);
  k.k0_ = k0;
  k.kinf_ = kinf;
  k.laplacian0_ = laplacian0;
  k.spec_ = "tabulated:" + source;
  return k;
}

Perturbation Perturbation::constant(double c) {
  return tabulated({0.0, 1.0}, {c, c}, c, c, 0.0, "constant(" + format_real(c) + ")");
}

double Perturbation::interpolate(double r) const {
  if (r <= r_.front()) return k_.front();
  if (r >= r_.back()) return k_.back();
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
  const double h = r_[i + 1] - r_[i];
  const double s = (r - r_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * k_[i] + (s3 - 2 * s2 + s) * h * slope_[i] +
         (-2 * s3 + 3 * s2) * k_[i + 1] + (s3 - s2) * h * slope_[i + 1];
}

double Perturbation::operator()(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("perturbation: r must be >= 0");
  switch (kind_) {
    case Kind::GaussianBump:
      if (r == 0.0) return 0.0;
      return at_log_radius(std::log(r));
    case Kind::Rational: {
      const double r2 = r * r;
      if (r2 > 1.0) return at_log_radius(std::log(r));
      return (args_[0] + args_[1] * r2) / ((1.0 + r2) * (1.0 + r2));
    }
    case Kind::Tabulated:
      return interpolate(r);
  }
  return 0.0;
}

double Perturbation::at_log_radius(double t) const {
  switch (kind_) {
    case Kind::GaussianBump: {
      const double z = (t - args_[1]) / args_[2];
      return args_[0] * std::exp(-z * z);
    }
    case Kind::Rational: {
      if (t <= 0.0) {
        const double r2 = std::exp(2.0 * t);
        return (args_[0] + args_[1] * r2) / ((1.0 + r2) * (1.0 + r2));
      }
      const double x = std::exp(-2.0 * t);  // 1/r^2
      return (args_[0] * x * x + args_[1] * x) / ((1.0 + x) * (1.0 + x));
    }
    case Kind::Tabulated:
      if (t > 700.0) return k_.back();
      return interpolate(std::exp(t));
  }
  return 0.0;
}

Perturbation parse_perturbation(const std::string& text, int N) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("perturbation '" + text +
                                "': expected gaussian-bump:c,t0,s | rational:alpha,beta | tabulated:<path>");
  }
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  if (kind == "gaussian-bump") {
    const auto v = parse_args(args, 3, text);
    return Perturbation::gaussian_bump(v[0], v[1], v[2]);
  }
  if (kind == "rational") {
    const auto v = parse_args(args, 2, text);
    return Perturbation::rational(v[0], v[1], N);
  }
  if (kind == "tabulated") {
    if (args.empty()) throw std::invalid_argument("perturbation '" + text + "': missing path");
    return load_tabulated(args);
  }
  throw std::invalid_argument("perturbation '" + text + "': unknown kind '" + kind + "'");
}

Perturbation load_tabulated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("tabulated: cannot open '" + path.string() + "'");
  std::vector<double> r, k;
  std::optional<double> k0, kinf, lap0;
  std::string line;
  const std::string context = "tabulated:" + path.string();
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream is(line.substr(first + 1));
      std::string token;
      while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "k0") k0 = parse_number(value, context);
        if (key == "kinf") kinf = parse_number(value, context);
        if (key == "laplacian0") lap0 = parse_number(value, context);
      }
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    std::string a, b, extra;
    if (!(is >> a >> b) || (is >> extra)) {
      throw std::invalid_argument(context + ": expected two columns in '" + line + "'");
    }
    if (r.empty() && a == "r") continue;
    r.push_back(parse_number(a, context));
    k.push_back(parse_number(b, context));
  }
  if (k.empty()) throw std::invalid_argument(context + ": no data rows");
  const double k0v = k0.value_or(k.front());
  const double kinfv = kinf.value_or(k.back());
  return Perturbation::tabulated(std::move(r), std::move(k), k0v, kinfv, lap0, path.string());
}

ConditionReport check_conditions(const Perturbation& k) {
  ConditionReport report;
  report.vanishing_ends = k.k0() == 0.0 && k.kinf() == 0.0;
  report.laplacian_known = k.laplacian0().has_value();
  if (report.laplacian_known) {
    const double lap = *k.laplacian0();
    report.bump_at_origin = k.kinf() <= k.k0() && lap > 0.0;
    report.dip_at_origin = k.kinf() >= k.k0() && lap < 0.0;
  }
  std::vector<std::string> reasons;
  if (report.vanishing_ends) reasons.emplace_back("k(0)=k(inf)=0: Gamma vanishes at both ends");
  if (report.bump_at_origin) reasons.emplace_back("k(inf)<=k(0), Laplacian k(0)>0: Gamma rises from mu=0");
  if (report.dip_at_origin) reasons.emplace_back("k(inf)>=k(0), Laplacian k(0)<0: Gamma falls from mu=0");
  if (reasons.empty()) {
    report.prediction = "no prediction";
  } else {
    report.prediction = "solvable for small |eps| (";
    for (std::size_t i = 0; i < reasons.size(); ++i) {
      if (i) report.prediction += "; ";
      report.prediction += reasons[i];
    }
    report.prediction += ")";
  }
  return report;
}

}  // namespace ckn
