#include "nscv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nscv/errors.hpp"
#include "nscv/kernels.hpp"
#include "nscv/util.hpp"

namespace nscv {

double phi_ball_value(const GrowthFunction& phi, const Vec3& center,
                      double radius, double discrete_measure) {
  if (phi.kind() == GrowthKind::MorreyCritical)
    return std::pow(discrete_measure, -1.0 / phi.params().p);
  return phi.eval(center, radius);
}

namespace {

bool is_node_center(const Grid3& g, const Vec3& c, int* idx_out) {
  for (int a = 0; a < 3; ++a) {
    int k = int(std::lround((c[a] + g.half_width) / g.spacing));
    if (k < 0 || k >= g.n || g.coord(k) != c[a]) return false;
    idx_out[a] = k;
  }
  return true;
}

// Gathers the ball's member values into scratch; returns the node count.
std::size_t gather_ball(const ScalarField& f, const Ball& b,
                        std::vector<double>& scratch) {
  const Grid3& g = f.grid();
  scratch.clear();
  int base[3];
  if (is_node_center(g, b.center, base)) {
    const BallOffsets& offs = node_ball_offsets(g, b.radius);
    scratch.reserve(offs.offsets.size());
    int mask = g.n - 1;
    for (const auto& d : offs.offsets) {
      int i = (base[0] + d[0]) & mask;
      int j = (base[1] + d[1]) & mask;
      int k = (base[2] + d[2]) & mask;
      scratch.push_back(f[g.idx(i, j, k)]);
    }
    return scratch.size();
  }
  for_each_ball_node(g, b, [&](std::size_t i) { scratch.push_back(f[i]); });
  return scratch.size();
}

struct BallNormResult {
  double value = -1.0;  // negative: skipped
};

// Shared sup-over-balls loop for the Campanato (subtract_mean) and Morrey
// norms. Parallel over deterministic chunks; the argmax scan is sequential
// with lowest-index tie-break.
NormReport ball_norm_core(const ScalarField& f, double p,
                          const GrowthFunction& phi,
                          const std::vector<Ball>& balls, bool subtract_mean,
                          const std::string& family) {
  if (balls.empty())
    throw ValidationError("norms", "empty ball family");
  if (!(p >= 1.0))
    throw ValidationError("norms", "norm exponent p must be >= 1");
  const Grid3& g = f.grid();
  double h3 = g.spacing * g.spacing * g.spacing;
  std::vector<double> vals(balls.size());

  parallel_chunks(balls.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> scratch;
    for (std::size_t bi = lo; bi < hi; ++bi) {
      const Ball& b = balls[bi];
      std::size_t count = gather_ball(f, b, scratch);
      if (count < 8) {
        vals[bi] = -1.0;
        continue;
      }
      double center = 0.0;
      if (subtract_mean)
        center = kernels::sum(scratch.data(), count) / double(count);
      double power_mean =
          kernels::sum_abs_pow(scratch.data(), count, p, center) /
          double(count);
      double lp = std::pow(power_mean, 1.0 / p);
      double w = phi_ball_value(phi, b.center, b.radius, double(count) * h3);
      vals[bi] = lp / w;
    }
  });

  NormReport rep;
  rep.family = family;
  rep.family_size = balls.size();
  bool found = false;
  for (std::size_t bi = 0; bi < balls.size(); ++bi) {
    if (vals[bi] < 0.0) {
      ++rep.skipped;
      continue;
    }
    if (!found || vals[bi] > rep.seminorm) {
      rep.seminorm = vals[bi];
      rep.argmax_ball = balls[bi];
      found = true;
    }
  }
  if (!found)
    throw ValidationError("norms",
                          "ball family contains no ball with >= 8 nodes");
  rep.value = rep.seminorm;
  return rep;
}

double origin_unit_ball_average(const ScalarField& f) {
  return ball_average(f, Ball{{0.0, 0.0, 0.0}, 1.0});
}

}  // namespace

NormReport campanato_norm(const ScalarField& f, double p,
                          const GrowthFunction& phi,
                          const std::vector<Ball>& balls,
                          const std::string& family) {
  return ball_norm_core(f, p, phi, balls, true, family);
}

NormReport pointed_campanato_norm(const ScalarField& f, double p,
                                  const GrowthFunction& phi,
                                  const std::vector<Ball>& balls,
                                  const std::string& family) {
  NormReport rep = ball_norm_core(f, p, phi, balls, true, family);
  rep.point_term = std::fabs(origin_unit_ball_average(f));
  rep.value = rep.seminorm + rep.point_term;
  return rep;
}

NormReport morrey_norm(const ScalarField& f, double p,
                       const GrowthFunction& phi,
                       const std::vector<Ball>& balls,
                       const std::string& family) {
  return ball_norm_core(f, p, phi, balls, false, family);
}

int PairFamily::effective_stride(const Grid3& g) const {
  if (stride > 0) return stride;
  return g.n <= 16 ? 1 : g.n / 16;
}

std::string PairFamily::describe(const Grid3& g) const {
  std::ostringstream os;
  os << "pairs(stride=" << effective_stride(g) << ")";
  return os.str();
}

namespace {

NormReport holder_core(const ScalarField& f, const GrowthFunction& phi,
                       const PairFamily& pairs) {
  const Grid3& g = f.grid();
  int stride = pairs.effective_stride(g);
  std::vector<std::array<int, 3>> nodes;
  for (int i = 0; i < g.n; i += stride)
    for (int j = 0; j < g.n; j += stride)
      for (int k = 0; k < g.n; k += stride) nodes.push_back({i, j, k});
  if (nodes.size() < 2)
    throw ValidationError("norms", "empty pair family");

  std::vector<double> best(nodes.size(), 0.0);
  std::vector<std::size_t> best_j(nodes.size(), 0);
  parallel_chunks(nodes.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t a = lo; a < hi; ++a) {
      Vec3 x = g.node(nodes[a][0], nodes[a][1], nodes[a][2]);
      double fx = f.at(nodes[a][0], nodes[a][1], nodes[a][2]);
      double loc = 0.0;
      std::size_t loc_j = a;
      for (std::size_t bidx = a + 1; bidx < nodes.size(); ++bidx) {
        double fy = f.at(nodes[bidx][0], nodes[bidx][1], nodes[bidx][2]);
        double diff = std::fabs(fx - fy);
        if (diff == 0.0) continue;
        Vec3 y = g.node(nodes[bidx][0], nodes[bidx][1], nodes[bidx][2]);
        double d = g.periodic_distance(x, y);
        double q = 2.0 * diff / (phi.eval(x, d) + phi.eval(y, d));
        if (q > loc) {
          loc = q;
          loc_j = bidx;
        }
      }
      best[a] = loc;
      best_j[a] = loc_j;
    }
  });

  NormReport rep;
  rep.pair_based = true;
  rep.family = pairs.describe(g);
  rep.family_size = nodes.size() * (nodes.size() - 1) / 2;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    if (best[a] > rep.seminorm) {
      rep.seminorm = best[a];
      rep.argmax_x = g.node(nodes[a][0], nodes[a][1], nodes[a][2]);
      std::size_t bj = best_j[a];
      rep.argmax_y = g.node(nodes[bj][0], nodes[bj][1], nodes[bj][2]);
    }
  }
  rep.value = rep.seminorm;
  return rep;
}

}  // namespace

NormReport holder_norm(const ScalarField& f, const GrowthFunction& phi,
                       const PairFamily& pairs) {
  return holder_core(f, phi, pairs);
}

NormReport pointed_holder_norm(const ScalarField& f, const GrowthFunction& phi,
                               const PairFamily& pairs) {
  NormReport rep = holder_core(f, phi, pairs);
  const Grid3& g = f.grid();
  int o = g.origin_index();
  rep.point_term = std::fabs(f.at(o, o, o));
  rep.value = rep.seminorm + rep.point_term;
  return rep;
}

double lip_norm_on_ball(const ScalarField& f, double alpha, const Ball& bstar) {
  const Grid3& g = f.grid();
  std::vector<std::size_t> members;
  for_each_ball_node(g, bstar, [&](std::size_t i) { members.push_back(i); });
  if (members.size() < 2)
    throw ValidationError("norms", "ball contains fewer than 2 nodes");
  // Recover index triples from linear indices.
  auto unpack = [&](std::size_t idx) {
    int k = int(idx % g.n);
    int j = int((idx / g.n) % g.n);
    int i = int(idx / (std::size_t(g.n) * g.n));
    return g.node(i, j, k);
  };
  double best = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    Vec3 x = unpack(members[a]);
    double fx = f[members[a]];
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      double diff = std::fabs(fx - f[members[b]]);
      if (diff == 0.0) continue;
      Vec3 y = unpack(members[b]);
      double d = g.periodic_distance(x, y);
      double q = diff / std::pow(d, alpha);
      if (q > best) best = q;
    }
  }
  return best;
}

double sigma_limit(const ScalarField& f) { return f.mean(); }

SigmaReport sigma_report(const ScalarField& f) {
  SigmaReport rep;
  rep.mean = f.mean();
  std::vector<double> radii = default_dyadic_radii(f.grid());
  std::sort(radii.rbegin(), radii.rend());
  if (radii.size() > 3) radii.resize(3);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double r : radii) {
    double avg = ball_average(f, Ball{{0.0, 0.0, 0.0}, r});
    rep.radii.push_back(r);
    rep.ball_averages.push_back(avg);
    if (first) {
      lo = hi = avg;
      first = false;
    } else {
      lo = std::min(lo, avg);
      hi = std::max(hi, avg);
    }
  }
  rep.spread = first ? 0.0 : hi - lo;
  return rep;
}

EquivalenceTable equivalence_harness(const std::vector<ScalarField>& fields,
                                     double p1, double p2,
                                     const GrowthFunction& phi,
                                     const std::vector<Ball>& balls,
                                     const PairFamily& pairs) {
  EquivalenceTable table;
  try {
    table.conditions = check_conditions(phi, GrowthSampleSpec::standard());
  } catch (const NumericalError& e) {
    throw ValidationError("norms",
                          std::string("equivalence prerequisite unmet: "
                                      "condition check failed: ") +
                              e.what());
  }
  auto require = [](bool ok, const char* name) {
    if (!ok)
      throw ValidationError(
          "norms", std::string("equivalence prerequisite unmet: condition '") +
                       name + "' failed");
  };
  require(table.conditions.doubling.holds, "doubling");
  require(table.conditions.nearness.holds, "nearness");
  require(table.conditions.almost_increasing.holds, "almost-increasing");
  bool do_holder = table.conditions.dini_lower_constant.has_value();
  bool do_morrey = table.conditions.dini_upper_constant.has_value();

  bool first = true;
  bool first_h = true, first_m = true;
  for (const ScalarField& f : fields) {
    EquivalenceRow row;
    row.camp_p1 = campanato_norm(f, p1, phi, balls).value;
    row.camp_p2 = campanato_norm(f, p2, phi, balls).value;
    if (row.camp_p1 == 0.0 || row.camp_p2 == 0.0) {
      ++table.skipped_constant_fields;
      continue;
    }
    row.ratio_p = row.camp_p1 / row.camp_p2;
    if (do_holder) {
      row.holder = holder_norm(f, phi, pairs).value;
      if (*row.holder > 0.0) row.ratio_holder = row.camp_p1 / *row.holder;
    }
    if (do_morrey) {
      ScalarField centered = f;
      double s = sigma_limit(f);
      for (std::size_t i = 0; i < centered.size(); ++i) centered[i] -= s;
      row.morrey_centered = morrey_norm(centered, p1, phi, balls).value;
      if (*row.morrey_centered > 0.0)
        row.ratio_morrey = row.camp_p1 / *row.morrey_centered;
    }
    if (first) {
      table.min_ratio_p = table.max_ratio_p = row.ratio_p;
      first = false;
    } else {
      table.min_ratio_p = std::min(table.min_ratio_p, row.ratio_p);
      table.max_ratio_p = std::max(table.max_ratio_p, row.ratio_p);
    }
    if (row.ratio_holder) {
      if (first_h) {
        table.min_ratio_holder = table.max_ratio_holder = *row.ratio_holder;
        first_h = false;
      } else {
        table.min_ratio_holder =
            std::min(*table.min_ratio_holder, *row.ratio_holder);
        table.max_ratio_holder =
            std::max(*table.max_ratio_holder, *row.ratio_holder);
      }
    }
    if (row.ratio_morrey) {
      if (first_m) {
        table.min_ratio_morrey = table.max_ratio_morrey = *row.ratio_morrey;
        first_m = false;
      } else {
        table.min_ratio_morrey =
            std::min(*table.min_ratio_morrey, *row.ratio_morrey);
        table.max_ratio_morrey =
            std::max(*table.max_ratio_morrey, *row.ratio_morrey);
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace nscv
