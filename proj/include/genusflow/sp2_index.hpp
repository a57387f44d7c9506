#pragma once

// Spectral classification of 2x2 symplectic matrices and the mean /
// Conley-Zehnder indices of sampled symplectic paths starting at the identity.

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace genusflow::sp2 {

inline constexpr double kTolDet = 1e-9;
inline constexpr double kTolClass = 1e-9;
inline constexpr double kTolInt = 1e-6;
inline constexpr double kLiftMargin = 0.1;

/// Plain row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double trace() const noexcept { return a + d; }
  double det() const noexcept { return a * d - b * c; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) noexcept {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// A matrix with unit determinant (within kTolDet at construction).
class SymplecticMatrix2 {
public:
  SymplecticMatrix2() = default;

  /// Throws NotSymplectic when |det - 1| > tol_det.
  static SymplecticMatrix2 from_entries(double a, double b, double c, double d,
                                        double tol_det = kTolDet);
  /// Rescales by 1/sqrt(det) (det must be positive). Used for numerically
  /// estimated linearizations.
  static SymplecticMatrix2 normalized(const Mat2& m);

  static SymplecticMatrix2 identity() noexcept { return {}; }
  static SymplecticMatrix2 rotation(double angle) noexcept;
  /// diag(lambda, 1/lambda)
  static SymplecticMatrix2 diagonal(double lambda) noexcept;
  /// exp(X) for traceless X.
  static SymplecticMatrix2 exp_traceless(const Mat2& x) noexcept;

  const Mat2& matrix() const noexcept { return m_; }
  double a() const noexcept { return m_.a; }
  double b() const noexcept { return m_.b; }
  double c() const noexcept { return m_.c; }
  double d() const noexcept { return m_.d; }
  double trace() const noexcept { return m_.trace(); }
  double det() const noexcept { return m_.det(); }

  SymplecticMatrix2 inverse() const noexcept {
    return SymplecticMatrix2(Mat2{m_.d, -m_.b, -m_.c, m_.a});
  }
  SymplecticMatrix2 pow(unsigned k) const noexcept;

  friend SymplecticMatrix2 operator*(const SymplecticMatrix2& x,
                                     const SymplecticMatrix2& y) noexcept {
    return SymplecticMatrix2(x.m_ * y.m_);
  }
  friend bool operator==(const SymplecticMatrix2&, const SymplecticMatrix2&) = default;

private:
  explicit SymplecticMatrix2(const Mat2& m) noexcept : m_(m) {}
  Mat2 m_{};
};

/// Traceless logarithm of a matrix close enough to the identity
/// (trace > -2). Throws InsufficientResolution otherwise.
Mat2 log_traceless(const SymplecticMatrix2& m);

enum class SpectralClass { Elliptic, HyperbolicPositive, HyperbolicNegative, Degenerate };

std::string to_string(SpectralClass c);
SpectralClass classify(const SymplecticMatrix2& m, double tol_class = kTolClass);

/// Named normalization targets W+ = -Id and W- = diag(1/2, 2).
SymplecticMatrix2 w_plus() noexcept;
SymplecticMatrix2 w_minus() noexcept;

/// rho(A) on the unit circle. Throws DegenerateMatrix for |trace| = 2 unless
/// A = +-Id.
std::complex<double> rho(const SymplecticMatrix2& m, double tol_class = kTolClass);

/// Argument of the continuous extension of rho to all of Sp(2), in (-pi, pi]:
/// 0 when trace >= 2, pi when trace <= -2. This is what the angle lift uses.
double rotation_angle(const SymplecticMatrix2& m) noexcept;

struct PathSample {
  double t;
  SymplecticMatrix2 m;
};

/// Sampled path in Sp(2): first sample (0, Id), strictly increasing t, last t = 1.
class SymplecticPath {
public:
  explicit SymplecticPath(std::vector<PathSample> samples);

  /// Samples `fn` on a uniform grid of `n` intervals and bisects any interval
  /// whose angle jump violates the lift condition.
  static SymplecticPath sample(const std::function<SymplecticMatrix2(double)>& fn,
                               std::size_t n = 64, double margin = kLiftMargin);

  const std::vector<PathSample>& samples() const noexcept { return samples_; }
  const SymplecticMatrix2& end() const noexcept { return samples_.back().m; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Rows "t,a,b,c,d".
  std::string to_csv() const;

private:
  std::vector<PathSample> samples_;
};

/// Largest raw angle jump between consecutive samples.
double max_angle_jump(const SymplecticPath& path);

/// Inserts geodesic midpoints M_a exp(s log(M_a^-1 M_b)) until every step
/// satisfies the lift condition.
SymplecticPath refine(const SymplecticPath& path, double margin = kLiftMargin);

double mean_index(const SymplecticPath& path, double margin = kLiftMargin);

/// Component-preserving path from a nondegenerate `endpoint` to W+ or W-.
/// Samples include both ends. Throws DegenerateEndpoint or
/// NormalizationEscapedComponent.
std::vector<SymplecticMatrix2> normalization_path(const SymplecticMatrix2& endpoint,
                                                  double margin = kLiftMargin);

int cz_index(const SymplecticPath& path, double margin = kLiftMargin);
int cz_index_shortcut(double delta, SpectralClass cls);

SymplecticPath iterate_path(const SymplecticPath& path, unsigned k,
                            double margin = kLiftMargin);

} // namespace genusflow::sp2
