#include "genusflow/sp2_index.hpp"

#include "genusflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace genusflow::sp2 {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) noexcept { return std::remainder(x, 2.0 * kPi); }

double angle_jump(const SymplecticMatrix2& from, const SymplecticMatrix2& to) noexcept {
  return wrap_angle(rotation_angle(to) - rotation_angle(from));
}

bool near_scalar(const SymplecticMatrix2& m, double s, double tol) noexcept {
  return std::abs(m.a() - s) <= tol && std::abs(m.d() - s) <= tol &&
         std::abs(m.b()) <= tol && std::abs(m.c()) <= tol;
}

using MatrixFn = std::function<SymplecticMatrix2(double)>;

void bisect_interval(const MatrixFn& fn, double t0, const SymplecticMatrix2& m0,
                     double t1, const SymplecticMatrix2& m1, double margin, int depth,
                     std::vector<PathSample>& out) {
  const double tm = 0.5 * (t0 + t1);
  const SymplecticMatrix2 mm = fn(tm);
  const double whole = angle_jump(m0, m1);
  const double left = angle_jump(m0, mm);
  const double right = angle_jump(mm, m1);
  // A consistent interval has small jumps whose halves add up; anything else
  // may hide a winding between samples.
  const bool ok = std::abs(whole) < kPi - margin && std::abs(left + right - whole) < 1e-9;
  if (ok) {
    out.push_back({t1, m1});
    return;
  }
  if (depth > 40) {
    throw Error(ErrorCode::InsufficientResolution,
                "angle lift did not resolve after 40 bisections near t=" + std::to_string(t0));
  }
  bisect_interval(fn, t0, m0, tm, mm, margin, depth + 1, out);
  bisect_interval(fn, tm, mm, t1, m1, margin, depth + 1, out);
}

// Uniform grid on [0, 1], adaptively bisected; includes both ends.
std::vector<PathSample> sample_adaptive(const MatrixFn& fn, std::size_t n, double margin) {
  n = std::max<std::size_t>(n, 1);
  std::vector<PathSample> out;
  out.reserve(n + 1);
  SymplecticMatrix2 prev = fn(0.0);
  out.push_back({0.0, prev});
  for (std::size_t i = 1; i <= n; ++i) {
    const double t0 = static_cast<double>(i - 1) / static_cast<double>(n);
    const double t1 = i == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n);
    const SymplecticMatrix2 next = fn(t1);
    bisect_interval(fn, t0, prev, t1, next, margin, 0, out);
    prev = next;
  }
  return out;
}

SymplecticMatrix2 geodesic(const SymplecticMatrix2& from, const Mat2& log_step, double s) {
  const Mat2 x{s * log_step.a, s * log_step.b, s * log_step.c, s * log_step.d};
  return from * SymplecticMatrix2::exp_traceless(x);
}

void refine_step(const PathSample& a, const PathSample& b, double margin, int depth,
                 std::vector<PathSample>& out) {
  if (std::abs(angle_jump(a.m, b.m)) < kPi - margin) {
    out.push_back(b);
    return;
  }
  if (depth > 40) {
    throw Error(ErrorCode::InsufficientResolution, "path refinement did not converge");
  }
  const Mat2 step = log_traceless(a.m.inverse() * b.m);
  const PathSample mid{0.5 * (a.t + b.t), geodesic(a.m, step, 0.5)};
  refine_step(a, mid, margin, depth + 1, out);
  refine_step(mid, b, margin, depth + 1, out);
}

} // namespace

SymplecticMatrix2 SymplecticMatrix2::from_entries(double a, double b, double c, double d,
                                                  double tol_det) {
  const Mat2 m{a, b, c, d};
  if (!(std::abs(m.det() - 1.0) <= tol_det)) {
    std::ostringstream os;
    os << "determinant " << m.det() << " differs from 1 by more than " << tol_det;
    throw Error(ErrorCode::NotSymplectic, os.str());
  }
  return SymplecticMatrix2(m);
}

SymplecticMatrix2 SymplecticMatrix2::normalized(const Mat2& m) {
  const double det = m.det();
  if (!(det > 0.0)) {
    throw Error(ErrorCode::NotSymplectic, "cannot normalize a matrix with non-positive determinant");
  }
  const double s = 1.0 / std::sqrt(det);
  return SymplecticMatrix2(Mat2{s * m.a, s * m.b, s * m.c, s * m.d});
}

SymplecticMatrix2 SymplecticMatrix2::rotation(double angle) noexcept {
  const double c = std::cos(angle), s = std::sin(angle);
  return SymplecticMatrix2(Mat2{c, -s, s, c});
}

SymplecticMatrix2 SymplecticMatrix2::diagonal(double lambda) noexcept {
  return SymplecticMatrix2(Mat2{lambda, 0.0, 0.0, 1.0 / lambda});
}

SymplecticMatrix2 SymplecticMatrix2::exp_traceless(const Mat2& x) noexcept {
  // X^2 = delta * Id for traceless X.
  const double delta = x.a * x.a + x.b * x.c;
  double c0, c1;
  if (delta > 1e-300) {
    const double s = std::sqrt(delta);
    c0 = std::cosh(s);
    c1 = std::sinh(s) / s;
  } else if (delta < -1e-300) {
    const double s = std::sqrt(-delta);
    c0 = std::cos(s);
    c1 = std::sin(s) / s;
  } else {
    c0 = 1.0;
    c1 = 1.0;
  }
  return SymplecticMatrix2(Mat2{c0 + c1 * x.a, c1 * x.b, c1 * x.c, c0 + c1 * x.d});
}

SymplecticMatrix2 SymplecticMatrix2::pow(unsigned k) const noexcept {
  SymplecticMatrix2 result;
  SymplecticMatrix2 base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    base = base * base;
    k >>= 1U;
  }
  return result;
}

Mat2 log_traceless(const SymplecticMatrix2& m) {
  const double h = 0.5 * m.trace();
  if (!(h > -1.0)) {
    throw Error(ErrorCode::InsufficientResolution,
                "step matrix too far from identity to take a logarithm");
  }
  double scale;
  if (h > 1.0 + 1e-12) {
    const double th = std::acosh(h);
    scale = th / std::sinh(th);
  } else if (h < 1.0 - 1e-12) {
    const double th = std::acos(h);
    scale = th / std::sin(th);
  } else {
    scale = 1.0;
  }
  return Mat2{scale * (m.a() - h), scale * m.b(), scale * m.c(), scale * (m.d() - h)};
}

std::string to_string(SpectralClass c) {
  switch (c) {
  case SpectralClass::Elliptic: return "Elliptic";
  case SpectralClass::HyperbolicPositive: return "HyperbolicPositive";
  case SpectralClass::HyperbolicNegative: return "HyperbolicNegative";
  case SpectralClass::Degenerate: return "Degenerate";
  }
  return "Degenerate";
}

SpectralClass classify(const SymplecticMatrix2& m, double tol_class) {
  const double tr = m.trace();
  if (std::abs(std::abs(tr) - 2.0) <= tol_class) return SpectralClass::Degenerate;
  if (tr > 2.0) return SpectralClass::HyperbolicPositive;
  if (tr < -2.0) return SpectralClass::HyperbolicNegative;
  return SpectralClass::Elliptic;
}

SymplecticMatrix2 w_plus() noexcept { return SymplecticMatrix2::diagonal(-1.0); }
SymplecticMatrix2 w_minus() noexcept { return SymplecticMatrix2::diagonal(0.5); }

std::complex<double> rho(const SymplecticMatrix2& m, double tol_class) {
  switch (classify(m, tol_class)) {
  case SpectralClass::Degenerate:
    if (near_scalar(m, 1.0, tol_class)) return {1.0, 0.0};
    if (near_scalar(m, -1.0, tol_class)) return {-1.0, 0.0};
    throw Error(ErrorCode::DegenerateMatrix, "rho undefined on |trace| = 2 away from +-Id");
  case SpectralClass::HyperbolicPositive: return {1.0, 0.0};
  case SpectralClass::HyperbolicNegative: return {-1.0, 0.0};
  case SpectralClass::Elliptic: break;
  }
  return std::polar(1.0, rotation_angle(m));
}

double rotation_angle(const SymplecticMatrix2& m) noexcept {
  const double h = 0.5 * m.trace();
  if (h >= 1.0) return 0.0;
  if (h <= -1.0) return kPi;
  const double s = (m.c() - m.b()) >= 0.0 ? 1.0 : -1.0;
  return std::atan2(s * std::sqrt(1.0 - h * h), h);
}

SymplecticPath::SymplecticPath(std::vector<PathSample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) {
    throw Error(ErrorCode::InvalidPath, "a path needs at least two samples");
  }
  if (samples_.front().t != 0.0 || !near_scalar(samples_.front().m, 1.0, kTolDet)) {
    throw Error(ErrorCode::InvalidPath, "path must start at (0, Id)");
  }
  if (std::abs(samples_.back().t - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidPath, "path must end at t = 1");
  }
  samples_.back().t = 1.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw Error(ErrorCode::InvalidPath, "sample times must be strictly increasing");
    }
  }
}

SymplecticPath SymplecticPath::sample(const std::function<SymplecticMatrix2(double)>& fn,
                                      std::size_t n, double margin) {
  return SymplecticPath(sample_adaptive(fn, n, margin));
}

std::string SymplecticPath::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,a,b,c,d\n";
  for (const auto& s : samples_) {
    os << s.t << ',' << s.m.a() << ',' << s.m.b() << ',' << s.m.c() << ',' << s.m.d() << '\n';
  }
  return os.str();
}

double max_angle_jump(const SymplecticPath& path) {
  double worst = 0.0;
  const auto& s = path.samples();
  for (std::size_t i = 1; i < s.size(); ++i) {
    worst = std::max(worst, std::abs(angle_jump(s[i - 1].m, s[i].m)));
  }
  return worst;
}

SymplecticPath refine(const SymplecticPath& path, double margin) {
  const auto& s = path.samples();
  std::vector<PathSample> out;
  out.reserve(s.size());
  out.push_back(s.front());
  for (std::size_t i = 1; i < s.size(); ++i) refine_step(s[i - 1], s[i], margin, 0, out);
  return SymplecticPath(std::move(out));
}

double mean_index(const SymplecticPath& path, double margin) {
  const auto& s = path.samples();
  double eta = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double jump = angle_jump(s[i - 1].m, s[i].m);
    if (std::abs(jump) >= kPi - margin) {
      throw Error(ErrorCode::InsufficientResolution,
                  "angle jump " + std::to_string(jump) + " at t=" + std::to_string(s[i].t));
    }
    eta += jump;
  }
  return eta / kPi;
}

std::vector<SymplecticMatrix2> normalization_path(const SymplecticMatrix2& endpoint,
                                                  double margin) {
  // Nondegenerate means 1 is not an eigenvalue; trace -2 (e.g. W+) is fine.
  if (std::abs(endpoint.trace() - 2.0) <= kTolClass) {
    throw Error(ErrorCode::DegenerateEndpoint, "endpoint has eigenvalue 1");
  }
  const SpectralClass cls = classify(endpoint);
  // Polar decomposition A = R(theta) * exp(K), K traceless symmetric.
  const double theta = std::atan2(endpoint.c() - endpoint.b(), endpoint.a() + endpoint.d());
  const SymplecticMatrix2 s_part = SymplecticMatrix2::rotation(-theta) * endpoint;
  const double off = 0.5 * (s_part.b() + s_part.c());
  const Mat2 k = log_traceless(SymplecticMatrix2::normalized(
      Mat2{s_part.a(), off, off, s_part.d()}));
  const double p = 0.5 * (k.a - k.d), q = 0.5 * (k.b + k.c);
  const double r0 = std::hypot(p, q);
  const double alpha0 = std::atan2(q, p);

  auto sym_exp = [](double r, double alpha) {
    const double pp = r * std::cos(alpha), qq = r * std::sin(alpha);
    return SymplecticMatrix2::exp_traceless(Mat2{pp, qq, qq, -pp});
  };

  std::vector<MatrixFn> stages;
  const bool plus = cls != SpectralClass::HyperbolicPositive;
  if (plus) {
    const double target = theta > 0.0 ? kPi : -kPi;
    stages.emplace_back([=](double s) {
      return SymplecticMatrix2::rotation(theta) * sym_exp((1.0 - s) * r0, alpha0);
    });
    stages.emplace_back([=](double s) {
      return SymplecticMatrix2::rotation(theta + s * (target - theta));
    });
  } else {
    const double r1 = std::log(2.0);
    const double target = alpha0 >= 0.0 ? kPi : -kPi;
    stages.emplace_back([=](double s) {
      return SymplecticMatrix2::rotation((1.0 - s) * theta) * sym_exp(r0, alpha0);
    });
    stages.emplace_back([=](double s) {
      return sym_exp(r0 + s * (r1 - r0), alpha0 + s * (target - alpha0));
    });
  }

  std::vector<SymplecticMatrix2> out;
  out.push_back(endpoint);
  for (const auto& stage : stages) {
    for (const auto& sample : sample_adaptive(stage, 32, margin)) out.push_back(sample.m);
  }
  out.back() = plus ? w_plus() : w_minus();
  for (const auto& m : out) {
    const double det_minus_id = 2.0 - m.trace();
    if (plus ? !(det_minus_id > 0.0) : !(det_minus_id < 0.0)) {
      throw Error(ErrorCode::NormalizationEscapedComponent,
                  "normalization path left its component of Sp(2)*");
    }
  }
  return out;
}

int cz_index(const SymplecticPath& path, double margin) {
  if (std::abs(path.end().trace() - 2.0) <= kTolClass) {
    throw Error(ErrorCode::DegenerateEndpoint, "cz_index needs an endpoint without eigenvalue 1");
  }
  double eta = kPi * mean_index(path, margin);
  const auto psi = normalization_path(path.end(), margin);
  for (std::size_t i = 1; i < psi.size(); ++i) {
    const double jump = angle_jump(psi[i - 1], psi[i]);
    if (std::abs(jump) >= kPi - margin) {
      throw Error(ErrorCode::InsufficientResolution, "normalization path under-resolved");
    }
    eta += jump;
  }
  const double value = eta / kPi;
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > kTolInt) {
    throw Error(ErrorCode::InsufficientResolution,
                "concatenated mean index " + std::to_string(value) + " is not an integer");
  }
  return static_cast<int>(rounded);
}

int cz_index_shortcut(double delta, SpectralClass cls) {
  const double rounded = std::round(delta);
  const bool integral = std::abs(delta - rounded) <= kTolInt;
  switch (cls) {
  case SpectralClass::Degenerate:
    throw Error(ErrorCode::InconsistentInput, "shortcut undefined for degenerate endpoints");
  case SpectralClass::Elliptic: {
    if (integral) {
      throw Error(ErrorCode::InconsistentInput, "elliptic endpoint with integral mean index");
    }
    const auto n = static_cast<long long>(std::floor(delta));
    return static_cast<int>(n % 2 != 0 ? n : n + 1);
  }
  case SpectralClass::HyperbolicPositive:
  case SpectralClass::HyperbolicNegative:
    if (!integral) {
      throw Error(ErrorCode::InconsistentInput, "hyperbolic endpoint with non-integral mean index");
    }
    return static_cast<int>(rounded);
  }
  return 0;
}

SymplecticPath iterate_path(const SymplecticPath& path, unsigned k, double margin) {
  if (k == 0) throw Error(ErrorCode::InvalidPath, "iterate count must be positive");
  const auto& s = path.samples();
  const SymplecticMatrix2 end = path.end();
  const double kd = static_cast<double>(k);
  std::vector<PathSample> out;
  out.reserve(s.size() * k);
  out.push_back(s.front());
  SymplecticMatrix2 power;
  // Block j is t -> Phi(t) * Phi(1)^j. Midpoints are interpolated on the
  // original step and then multiplied by the power, which avoids inverting
  // large products.
  for (unsigned j = 0; j < k; ++j) {
    for (std::size_t m = 1; m < s.size(); ++m) {
      const double jd = static_cast<double>(j);
      const PathSample a{(jd + s[m - 1].t) / kd, s[m - 1].m * power};
      const PathSample b{(jd + s[m].t) / kd, s[m].m * power};
      const SymplecticMatrix2 base = s[m - 1].m;
      const Mat2 step = std::abs(angle_jump(a.m, b.m)) < kPi - margin
                            ? Mat2{}
                            : log_traceless(base.inverse() * s[m].m);
      std::function<void(const PathSample&, const PathSample&, double, double, int)> rec =
          [&](const PathSample& pa, const PathSample& pb, double s0, double s1, int depth) {
            if (std::abs(angle_jump(pa.m, pb.m)) < kPi - margin) {
              out.push_back(pb);
              return;
            }
            if (depth > 40) {
              throw Error(ErrorCode::InsufficientResolution, "iterate refinement did not converge");
            }
            const double sm = 0.5 * (s0 + s1);
            const PathSample mid{0.5 * (pa.t + pb.t), geodesic(base, step, sm) * power};
            rec(pa, mid, s0, sm, depth + 1);
            rec(mid, pb, sm, s1, depth + 1);
          };
      rec(a, b, 0.0, 1.0, 0);
    }
    power = power * end;
  }
  out.back().t = 1.0;
  return SymplecticPath(std::move(out));
}

} // namespace genusflow::sp2
