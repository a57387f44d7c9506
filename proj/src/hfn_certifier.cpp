#include "genusflow/hfn_certifier.hpp"

#include "genusflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace genusflow {

namespace {

constexpr double kTolHyperbolic = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

sp2::SpectralClass class_from_string(const std::string& s) {
  for (auto c : {sp2::SpectralClass::Elliptic, sp2::SpectralClass::HyperbolicPositive,
                 sp2::SpectralClass::HyperbolicNegative, sp2::SpectralClass::Degenerate}) {
    if (sp2::to_string(c) == s) return c;
  }
  throw Error(ErrorCode::BadConfig, "unknown spectral class '" + s + "'");
}

bool hyperbolic(sp2::SpectralClass c) {
  return c == sp2::SpectralClass::HyperbolicPositive || c == sp2::SpectralClass::HyperbolicNegative;
}

bool odd(int n) { return n % 2 != 0; }

bool same_point(const FixedPointIndexData& a, const FixedPointIndexData& b) {
  return a.id == b.id && a.cz == b.cz && a.mean_index == b.mean_index && a.spectral_class == b.spectral_class;
}

} // namespace

double index_tolerance(IndexMode mode) noexcept { return mode == IndexMode::Numeric ? 1e-9 : 0.0; }

std::optional<std::string> index_data_problem(const FixedPointIndexData& p) {
  const double d = p.mean_index;
  const int mu = p.cz;
  std::ostringstream os;
  os << p.id << ": ";
  if (!std::isfinite(d)) {
    os << "mean index is not finite";
  } else if (!(std::abs(d - mu) < 1.0)) {
    os << "|Delta - mu_CZ| = |" << fmt(d) << " - " << mu << "| is not below 1";
  } else if (p.spectral_class == sp2::SpectralClass::Degenerate) {
    os << "degenerate fixed point";
  } else if (p.spectral_class == sp2::SpectralClass::Elliptic && !odd(mu)) {
    os << "elliptic point with even mu_CZ = " << mu;
  } else if (p.spectral_class == sp2::SpectralClass::Elliptic && std::abs(d - std::round(d)) <= kTolHyperbolic) {
    os << "elliptic point with integer mean index " << fmt(d);
  } else if (hyperbolic(p.spectral_class) && std::abs(d - mu) > kTolHyperbolic) {
    os << "hyperbolic point with Delta = " << fmt(d) << " != mu_CZ = " << mu;
  } else if (hyperbolic(p.spectral_class) && (p.spectral_class == sp2::SpectralClass::HyperbolicPositive) == odd(mu)) {
    os << sp2::to_string(p.spectral_class) << " point with mu_CZ = " << mu << " of the wrong parity";
  } else {
    return std::nullopt;
  }
  return os.str();
}

std::vector<FixedPointIndexData> index_data(const std::vector<FixedPointRecord>& records) {
  std::vector<FixedPointIndexData> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::ostringstream id;
    id << to_string(r.location.chart) << "@" << r.location.coords.x << "," << r.location.coords.y;
    out.push_back({id.str(), r.mean_index, r.cz, r.spectral_class});
  }
  return out;
}

long ChainSummary::total() const noexcept {
  long n = 0;
  for (const auto& [k, v] : ranks) n += v;
  return n;
}

ChainSummary chain_ranks(const std::vector<FixedPointIndexData>& points) {
  std::vector<std::string> problems;
  ChainSummary c;
  for (const auto& p : points) {
    if (auto why = index_data_problem(p)) {
      problems.push_back(*why);
      continue;
    }
    ++c.ranks[p.cz];
  }
  if (!problems.empty()) {
    std::string msg = "invalid index data";
    for (const auto& s : problems) msg += "; " + s;
    throw Error(ErrorCode::InvalidIndexData, msg);
  }
  return c;
}

long HfnResult::rank(int degree) const {
  const auto it = ranks.find(degree);
  return it == ranks.end() ? 0 : it->second;
}

HfnResult hfn_from_lacunary(const ChainSummary& summary) {
  HfnResult h;
  for (const auto& [k, v] : summary.ranks) {
    if (v <= 0) continue;
    const auto next = summary.ranks.find(k + 1);
    if (next != summary.ranks.end() && next->second > 0) {
      h.lacunary = false;
      h.adjacent = std::make_pair(k, k + 1);
      h.ranks.clear();
      return h;
    }
    h.ranks[k] = v;
  }
  return h;
}

int tau0(const FixedPointIndexData& x0, const std::vector<FixedPointIndexData>& S, IndexMode mode) {
  if (S.empty()) return 2;
  const double tol = index_tolerance(mode);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& y : S) {
    const double gap = std::abs(x0.mean_index - y.mean_index);
    if (gap <= tol) {
      throw Error(ErrorCode::SContainsEqualIndex,
                  y.id + " has the same mean index as " + x0.id + " (" + fmt(y.mean_index) + ")");
    }
    m = std::min(m, gap);
  }
  // k m > 3 is monotone in k; start at the real-arithmetic answer and fix rounding.
  const double guess = std::floor(3.0 / m) + 1.0;
  if (guess > static_cast<double>(std::numeric_limits<int>::max() - 2)) {
    throw Error(ErrorCode::PreconditionViolation, "mean index gap too small for an int tau0");
  }
  int k = std::max(2, static_cast<int>(guess));
  while (!(k * m > 3.0)) ++k;
  while (k > 2 && (k - 1) * m > 3.0) --k;
  return k;
}

int forced_cz(double delta, double tol) {
  const double r = std::round(delta);
  if (std::abs(delta - r) <= tol) return static_cast<int>(r);
  return 2 * static_cast<int>(std::floor(delta / 2.0)) + 1;
}

double PrimeLedger::min_margin() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) m = std::min(m, e.margin);
  return m;
}

bool is_prime(int n) noexcept {
  if (n < 2) return false;
  for (int d = 2; static_cast<long>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<int> primes_up_to(int n) {
  std::vector<int> out;
  if (n < 2) return out;
  std::vector<char> composite(static_cast<std::size_t>(n) + 1, 0);
  for (long i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(static_cast<int>(i));
    for (long j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = 1;
  }
  return out;
}

long prime_count(int n) { return static_cast<long>(primes_up_to(n).size()); }

PrimeLedger certify_prime(const FixedPointIndexData& x0, const std::vector<FixedPointIndexData>& all_points, int tau,
                          IndexMode mode) {
  const double tol = index_tolerance(mode);
  if (!is_prime(tau)) throw Error(ErrorCode::PreconditionViolation, std::to_string(tau) + " is not prime");
  if (std::abs(x0.mean_index) <= tol) {
    throw Error(ErrorCode::PreconditionViolation, "mean index of " + x0.id + " is zero");
  }
  PrimeLedger l;
  l.tau = tau;
  l.delta0 = x0.mean_index;
  l.iterated_delta = tau * x0.mean_index;
  l.mu_lo = l.iterated_delta - 1.0;
  l.mu_hi = l.iterated_delta + 1.0;
  l.mu = forced_cz(l.iterated_delta, tau * tol);

  for (const auto& y : all_points) {
    if (same_point(y, x0)) continue;
    InequalityEntry e;
    e.y = y.id;
    e.gap = std::abs(x0.mean_index - y.mean_index);
    if (e.gap > tol) {
      e.kind = InequalityEntry::Kind::Separation;
      e.lhs = tau * e.gap - 2.0;
      e.margin = e.lhs - 1.0;
      e.text = "1 = |mu(x0^" + std::to_string(tau) + ") - mu(y^" + std::to_string(tau) + ")| >= " +
               std::to_string(tau) + " * " + fmt(e.gap) + " - 2 = " + fmt(e.lhs) + " > 1";
      if (!(e.margin > 0.0)) {
        throw Error(ErrorCode::MarginFailure, "tau = " + std::to_string(tau) + ", y = " + y.id + ": " +
                                                  std::to_string(tau) + " * " + fmt(e.gap) + " - 2 = " + fmt(e.lhs) +
                                                  " is not greater than 1");
      }
    } else {
      e.kind = InequalityEntry::Kind::ForcedEquality;
      e.lhs = 0.0;
      e.margin = 1.0;
      e.text = "Delta(x0^" + std::to_string(tau) + ") = Delta(y^" + std::to_string(tau) + ") = " +
               fmt(l.iterated_delta) + ", so mu(x0^" + std::to_string(tau) + ") = mu(y^" + std::to_string(tau) +
               ") = " + std::to_string(l.mu) + " and no connecting orbit has index difference 1";
    }
    l.entries.push_back(e);
  }

  // mu = 0 would make x0^tau hyperbolic with Delta(x0^tau) = mu = 0, hence Delta(x0) = 0.
  if (l.mu == 0) {
    throw Error(ErrorCode::MarginFailure, "forced index of " + x0.id + "^" + std::to_string(tau) + " is 0");
  }
  l.conclusion = "mu(x0^" + std::to_string(tau) + ") = " + std::to_string(l.mu) + " lies in (" + fmt(l.mu_lo) +
                 ", " + fmt(l.mu_hi) + ") and is nonzero, so x0^" + std::to_string(tau) +
                 " survives in a homology group that vanishes; " + std::to_string(tau) + " is a simple period";
  return l;
}

std::string to_string(Theorem t) {
  switch (t) {
  case Theorem::Elliptic: return "elliptic";
  case Theorem::NonzeroMean: return "nonzero-mean";
  case Theorem::Count: return "count";
  }
  return "?";
}

std::string to_string(CertificateStatus s) {
  return s == CertificateStatus::Certified ? "Certified" : "NoHypothesisSatisfied";
}

bool Certificate::applies(Theorem t) const noexcept {
  return std::find(applicable.begin(), applicable.end(), t) != applicable.end();
}

Certificate classify_case(const std::vector<FixedPointIndexData>& points, int genus, int N, IndexMode mode) {
  if (genus < 2) throw Error(ErrorCode::PreconditionViolation, "genus must be at least 2");
  std::string problems;
  for (const auto& p : points) {
    if (auto why = index_data_problem(p)) problems += "; " + *why;
  }
  if (!problems.empty()) throw Error(ErrorCode::InconsistentInput, "index data" + problems);

  const double tol = index_tolerance(mode);
  const long minimum = 2L * genus - 2;
  Certificate c;
  c.N = N;
  c.assumptions = {"finitely many fixed points", "strongly non-degenerate: every iterate has nondegenerate fixed points"};

  const bool elliptic = std::any_of(points.begin(), points.end(), [](const FixedPointIndexData& p) {
    return p.spectral_class == sp2::SpectralClass::Elliptic;
  });
  const bool nonzero = std::any_of(points.begin(), points.end(), [&](const FixedPointIndexData& p) {
    return std::abs(p.mean_index) > tol;
  });
  if (elliptic) c.applicable.push_back(Theorem::Elliptic);
  if (nonzero) c.applicable.push_back(Theorem::NonzeroMean);

  if (static_cast<long>(points.size()) > minimum) {
    c.applicable.push_back(Theorem::Count);
    // Degree 0 carries the 2g - 2 generators; the extra point sits there only when it overflows.
    const long in_zero = std::count_if(points.begin(), points.end(), [](const FixedPointIndexData& p) { return p.cz == 0; });
    const auto pick = std::find_if(points.rbegin(), points.rend(), [&](const FixedPointIndexData& p) {
      return in_zero > minimum ? p.cz == 0 : p.cz != 0;
    });
    const FixedPointIndexData& x = *pick;
    CountCase cc;
    cc.extra = x.id;
    cc.mu = x.cz;
    if (x.cz == 0) {
      const auto y = std::find_if(points.begin(), points.end(), [](const FixedPointIndexData& p) { return p.cz == 1; });
      if (y == points.end()) {
        throw Error(ErrorCode::InconsistentInput,
                    std::to_string(points.size()) + " fixed points, all in degree 0: a degree-0 generator beyond " +
                        std::to_string(minimum) + " needs a degree-1 partner, and there is none");
      }
      cc.partner = y->id;
      cc.reduction = y->spectral_class == sp2::SpectralClass::Elliptic ? Theorem::Elliptic : Theorem::NonzeroMean;
      cc.text = "mu(x) = 0: x connects to " + y->id + " in degree 1, which is " +
                (cc.reduction == Theorem::Elliptic ? "elliptic" : "hyperbolic with Delta = mu = 1");
    } else if (x.cz == 1) {
      cc.reduction = x.spectral_class == sp2::SpectralClass::Elliptic ? Theorem::Elliptic : Theorem::NonzeroMean;
      cc.text = std::string("mu(x) = 1: x is ") +
                (cc.reduction == Theorem::Elliptic ? "elliptic" : "hyperbolic with Delta = mu = 1");
    } else {
      cc.reduction = Theorem::NonzeroMean;
      cc.text = "mu(x) = " + std::to_string(x.cz) + ": |Delta - mu| < 1 forces Delta(x) != 0";
    }
    c.count_case = cc;
  }

  if (c.applicable.empty()) return c;

  // Every route above ends at a point with nonzero mean index.
  const FixedPointIndexData* best = nullptr;
  int best_tau = std::numeric_limits<int>::max();
  std::vector<FixedPointIndexData> best_s;
  for (const auto& p : points) {
    if (std::abs(p.mean_index) <= tol) continue;
    std::vector<FixedPointIndexData> s;
    for (const auto& y : points) {
      if (std::abs(y.mean_index - p.mean_index) > tol) s.push_back(y);
    }
    const int t = tau0(p, s, mode);
    if (t < best_tau) {
      best = &p;
      best_tau = t;
      best_s = std::move(s);
    }
  }
  if (!best) throw Error(ErrorCode::InconsistentInput, "no fixed point with nonzero mean index");

  c.status = CertificateStatus::Certified;
  c.x0 = best->id;
  c.tau0 = best_tau;
  for (const auto& y : best_s) c.S.push_back(y.id);
  for (int p : primes_up_to(N)) {
    if (p > best_tau) c.certified.push_back(certify_prime(*best, points, p, mode));
  }
  c.expected_prime_count = prime_count(N) - prime_count(best_tau);
  return c;
}

FixedPointIndexData index_data_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("mean_index") || !j.contains("cz") || !j.contains("class")) {
    throw Error(ErrorCode::BadConfig, "index datum needs mean_index, cz and class");
  }
  FixedPointIndexData p;
  p.id = j.value("id", std::string{});
  p.mean_index = j.at("mean_index").get<double>();
  p.cz = j.at("cz").get<int>();
  p.spectral_class = class_from_string(j.at("class").get<std::string>());
  return p;
}

nlohmann::json to_json(const FixedPointIndexData& p) {
  return {{"id", p.id}, {"mean_index", p.mean_index}, {"cz", p.cz}, {"class", sp2::to_string(p.spectral_class)}};
}

nlohmann::json to_json(const ChainSummary& c) {
  nlohmann::json r = nlohmann::json::object();
  for (const auto& [k, v] : c.ranks) r[std::to_string(k)] = v;
  return {{"ranks", r}, {"total", c.total()}};
}

nlohmann::json to_json(const HfnResult& h) {
  nlohmann::json r = nlohmann::json::object();
  for (const auto& [k, v] : h.ranks) r[std::to_string(k)] = v;
  nlohmann::json j{{"lacunary", h.lacunary}, {"ranks", r}};
  if (h.adjacent) j["adjacent"] = {h.adjacent->first, h.adjacent->second};
  return j;
}

nlohmann::json to_json(const PrimeLedger& l) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : l.entries) {
    entries.push_back({{"y", e.y},
                       {"kind", e.kind == InequalityEntry::Kind::Separation ? "separation" : "forced-equality"},
                       {"gap", e.gap},
                       {"lhs", e.lhs},
                       {"margin", e.margin},
                       {"text", e.text}});
  }
  return {{"tau", l.tau},   {"delta0", l.delta0}, {"iterated_delta", l.iterated_delta},
          {"mu_interval", {l.mu_lo, l.mu_hi}},      {"mu", l.mu},
          {"entries", entries}, {"conclusion", l.conclusion}};
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json th = nlohmann::json::array();
  for (auto t : c.applicable) th.push_back(to_string(t));
  nlohmann::json ledger = nlohmann::json::array();
  for (const auto& l : c.certified) ledger.push_back(to_json(l));
  nlohmann::json j{{"status", to_string(c.status)},
                   {"applicable_theorems", th},
                   {"tau0", c.tau0},
                   {"N", c.N},
                   {"S", c.S},
                   {"certified_primes", ledger},
                   {"certified_count", c.certified.size()},
                   {"expected_prime_count", c.expected_prime_count},
                   {"assumptions", c.assumptions},
                   {"x0", nullptr},
                   {"count_case", nullptr}};
  if (c.x0) j["x0"] = *c.x0;
  if (c.count_case) {
    const auto& k = *c.count_case;
    j["count_case"] = {{"extra", k.extra}, {"mu", k.mu}, {"reduction", to_string(k.reduction)}, {"text", k.text}};
    if (k.partner) j["count_case"]["partner"] = *k.partner;
  }
  return j;
}

} // namespace genusflow
