#include "ncma/demod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncma::demod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sqnorm(Cplx z) {
  const double re = z.real(), im = z.imag();
  return re * re + im * im;
}

// Sign the point contributes to this target on the given rail.
inline int point_sign(const JointConstellation::Point& p, const DecodeTarget& t, int rail) {
  int rc = rail;
  if (t.comp == Component::I) rc = 0;
  else if (t.comp == Component::Q) rc = 1;
  int s = 1;
  if (t.a) s *= p.sign[0][rail];
  if (t.b) s *= p.sign[1][rail];
  if (t.c) s *= p.sign[2][rc];
  return s;
}

// log(sum(exp(v/scale))) over a subset, stable under large magnitudes.
double logsumexp(const std::vector<double>& neg_dist, const std::vector<int>& idx, double scale) {
  double m = -kInf;
  for (int i : idx) m = std::max(m, neg_dist[i]);
  double acc = 0.0;
  for (int i : idx) acc += std::exp((neg_dist[i] - m) / scale);
  return m / scale + std::log(acc);
}

struct TargetGroups {
  // Point indices with sign +1 (bit 0) and -1 (bit 1), one pair per rail used.
  std::array<std::vector<int>, 2> plus, minus;
  int rails = 1;
};

TargetGroups group_points(const JointConstellation& jc, const DecodeTarget& t) {
  TargetGroups g;
  g.rails = bits_per_symbol(jc, t);
  for (int rail = 0; rail < g.rails; ++rail) {
    for (int i = 0; i < static_cast<int>(jc.points.size()); ++i) {
      if (point_sign(jc.points[i], t, rail) > 0)
        g.plus[rail].push_back(i);
      else
        g.minus[rail].push_back(i);
    }
    if (g.plus[rail].empty() || g.minus[rail].empty())
      throw std::logic_error("demod: target does not split the constellation");
  }
  return g;
}

double llr_from_dists(const std::vector<double>& dist, const std::vector<int>& plus,
                      const std::vector<int>& minus, const DemodOptions& opt) {
  if (opt.exact) {
    std::vector<double> neg(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) neg[i] = -dist[i];
    return logsumexp(neg, plus, opt.noise_var) - logsumexp(neg, minus, opt.noise_var);
  }
  double d_plus = kInf, d_minus = kInf;
  for (int i : plus) d_plus = std::min(d_plus, dist[i]);
  for (int i : minus) d_minus = std::min(d_minus, dist[i]);
  return d_minus - d_plus;
}

}  // namespace

JointConstellation JointConstellation::build(const chan::ChannelRealization& real,
                                             const std::array<modem::Scheme, 3>& schemes) {
  double total_gain = 0.0;
  for (int s = 0; s < 3; ++s)
    for (int r = 0; r < 2; ++r) total_gain += std::abs(real.gain[s][r]);
  if (total_gain == 0.0) throw std::invalid_argument("JointConstellation: all channel gains are zero");

  // Per-user alphabet as (symbol, sign_I, sign_Q); bit 0 maps to +1.
  struct Entry {
    Cplx x;
    int8_t si, sq;
  };
  std::array<std::vector<Entry>, 3> alph;
  for (int s = 0; s < 3; ++s) {
    if (schemes[s] == modem::Scheme::Bpsk) {
      alph[s] = {{Cplx(1, 0), 1, 1}, {Cplx(-1, 0), -1, -1}};
    } else {
      alph[s] = {{Cplx(1, 1), 1, 1}, {Cplx(1, -1), 1, -1}, {Cplx(-1, 1), -1, 1}, {Cplx(-1, -1), -1, -1}};
    }
  }

  JointConstellation jc;
  jc.schemes = schemes;
  jc.points.reserve(alph[0].size() * alph[1].size() * alph[2].size());
  for (const Entry& ea : alph[0])
    for (const Entry& eb : alph[1])
      for (const Entry& ec : alph[2]) {
        Point p;
        p.img1 = real.gain[0][0] * ea.x + real.gain[1][0] * eb.x + real.gain[2][0] * ec.x;
        p.img2 = real.gain[0][1] * ea.x + real.gain[1][1] * eb.x + real.gain[2][1] * ec.x;
        p.sign = {{{ea.si, ea.sq}, {eb.si, eb.sq}, {ec.si, ec.sq}}};
        jc.points.push_back(p);
      }
  return jc;
}

void validate_target(const JointConstellation& jc, const DecodeTarget& t) {
  if (!t.a && !t.b && !t.c) throw std::invalid_argument("demod: empty decode target");
  const bool c_split = jc.schemes[2] == modem::Scheme::QpskSplit;
  if (t.comp != Component::None) {
    if (!t.c || !c_split)
      throw std::invalid_argument("demod: rail component only applies to a split-QPSK user C");
  } else if (t.c && c_split) {
    throw std::invalid_argument("demod: split-QPSK target must name a rail");
  }
}

int bits_per_symbol(const JointConstellation& jc, const DecodeTarget& t) {
  const uint8_t coeff[3] = {t.a, t.b, t.c};
  for (int s = 0; s < 3; ++s)
    if (coeff[s] && jc.schemes[s] == modem::Scheme::QpskStandard) return 2;
  return 1;
}

double llr_per_symbol(Cplx y1, Cplx y2, const JointConstellation& jc,
                      const DecodeTarget& t, int rail, const DemodOptions& opt) {
  validate_target(jc, t);
  if (rail < 0 || rail >= bits_per_symbol(jc, t))
    throw std::invalid_argument("llr_per_symbol: rail out of range for target");
  std::vector<double> dist(jc.points.size());
  for (std::size_t i = 0; i < jc.points.size(); ++i)
    dist[i] = sqnorm(y1 - jc.points[i].img1) + opt.weight2 * sqnorm(y2 - jc.points[i].img2);
  TargetGroups g = group_points(jc, t);
  return llr_from_dists(dist, g.plus[rail], g.minus[rail], opt);
}

std::vector<SoftBits> demod_bank(const chan::RxSlot& rx,
                                 const std::vector<DecodeTarget>& targets,
                                 const DemodOptions& opt) {
  const JointConstellation jc = JointConstellation::build(rx.realization, rx.schemes);
  const std::size_t n = rx.y1.size();
  if (n == 0 || rx.y2.size() != n) throw std::invalid_argument("demod_bank: bad slot");

  std::vector<TargetGroups> groups;
  groups.reserve(targets.size());
  for (const DecodeTarget& t : targets) {
    validate_target(jc, t);
    groups.push_back(group_points(jc, t));
  }

  std::vector<SoftBits> out(targets.size());
  for (std::size_t ti = 0; ti < targets.size(); ++ti)
    out[ti].resize(n * groups[ti].rails);

  std::vector<double> dist(jc.points.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < jc.points.size(); ++i)
      dist[i] = sqnorm(rx.y1[k] - jc.points[i].img1) + opt.weight2 * sqnorm(rx.y2[k] - jc.points[i].img2);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      const TargetGroups& g = groups[ti];
      for (int rail = 0; rail < g.rails; ++rail)
        out[ti][k * g.rails + rail] = llr_from_dists(dist, g.plus[rail], g.minus[rail], opt);
    }
  }
  return out;
}

SoftBits demod_stream(const chan::RxSlot& rx, const DecodeTarget& t, const DemodOptions& opt) {
  return demod_bank(rx, {t}, opt).front();
}

}  // namespace ncma::demod
