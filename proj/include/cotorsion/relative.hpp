#pragma once

// Relative homological algebra of a complete hereditary cotorsion triple:
// proper X-resolutions and Y-coresolutions, Ext_XY computed both ways,
// Z-projective and Z-injective dimensions, the X-id / Y-pd dichotomy, long
// exact sequences with explicit connecting maps, and global dimensions.

#include "cotorsion/triple.hpp"

namespace cotorsion {

class BalanceViolation : public std::logic_error {
 public:
  explicit BalanceViolation(std::size_t degree)
      : std::logic_error("Ext_XY computed from the two sides differs in degree " + std::to_string(degree)),
        degree(degree) {}
  std::size_t degree;
};

class PreconditionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Proper resolutions.

namespace detail {

inline Resolution extend_proper(const CotorsionTriple& t, const ModuleRep& m, std::size_t n, bool x_side) {
  const std::uint64_t key = t.oracle_id() * 8 + (x_side ? 4 : 5);
  // Stored with m replaced by a detached copy (see ModuleRep::detached).
  std::shared_ptr<const Resolution> cached;
  {
    std::lock_guard lock(m.cache().mutex);
    auto it = m.cache().derived.find(key);
    if (it != m.cache().derived.end()) cached = std::static_pointer_cast<const Resolution>(it->second);
  }
  auto swapped = [](const Resolution& r, const ModuleRep& from, const ModuleRep& to) {
    Resolution s{to, {}, r.flavor};
    for (const auto& step : r.steps) s.steps.push_back(swap_module(step, from, to));
    return s;
  };
  Resolution out = cached ? swapped(*cached, cached->target, m)
                          : Resolution{m, {}, x_side ? ResolutionFlavor::proper_x : ResolutionFlavor::proper_y};
  if (out.steps.size() >= n) {
    out.steps.resize(n);
    return out;
  }
  while (out.steps.size() < n) {
    ModuleRep next = out.syzygy(out.steps.size());
    ApproxSeq a = x_side ? t.right_X_approx(next) : t.left_Y_approx(next);
    out.steps.push_back(a.seq);
  }
  auto store = std::make_shared<const Resolution>(swapped(out, m, m.detached()));
  std::lock_guard lock(m.cache().mutex);
  auto& slot = m.cache().derived[key];
  auto prev = std::static_pointer_cast<const Resolution>(slot);
  if (!prev || prev->steps.size() < store->steps.size()) slot = std::move(store);
  return out;
}

}  // namespace detail

/// steps[i] = 0 -> K_{i+1} -> X_i -> K_i -> 0, each a certified special right
/// X-approximation.
inline Resolution proper_x_resolution(const CotorsionTriple& t, const ModuleRep& m, std::size_t n) {
  return detail::extend_proper(t, m, n, true);
}

/// steps[i] = 0 -> L^i -> Y^i -> L^{i+1} -> 0, each a certified special left
/// Y-approximation.
inline Resolution proper_y_coresolution(const CotorsionTriple& t, const ModuleRep& n_mod, std::size_t n) {
  return detail::extend_proper(t, n_mod, n, false);
}

// ---------------------------------------------------------------------------
// Cochain complexes of hom spaces in coordinates.

/// C^0 -> C^1 -> ...; d[j] is dims[j+1] x dims[j].
struct CochainComplex {
  PrimeField field;
  std::vector<std::size_t> dims;
  std::vector<Matrix> d;

  std::size_t length() const { return dims.size(); }

  Matrix cocycles(std::size_t j) const {
    if (j < d.size()) return kernel_matrix(d[j]);
    return Matrix::identity(field, dims[j]);
  }
  Matrix coboundaries(std::size_t j) const {
    if (j == 0) return Matrix(field, dims[0], 0);
    return column_space(d[j - 1]);
  }
  /// Valid for j < d.size().
  std::size_t cohomology(std::size_t j) const {
    const std::size_t in = j == 0 ? 0 : rank(d[j - 1]);
    return dims[j] - rank(d[j]) - in;
  }
  bool is_complex() const {
    for (std::size_t j = 0; j + 1 < d.size(); ++j)
      if (!(d[j + 1] * d[j]).is_zero()) return false;
    return true;
  }
};

namespace detail {

/// Coordinates of the maps `images` in `hom`, as columns.
inline Matrix coordinate_columns(const HomSpace& hom, const std::vector<Matrix>& images) {
  Matrix out(hom.source().field(), hom.dim(), images.size());
  for (std::size_t k = 0; k < images.size(); ++k) {
    auto c = hom.coordinates(images[k]);
    for (std::size_t r = 0; r < c.size(); ++r) out(r, k) = c[r];
  }
  return out;
}

}  // namespace detail

/// Hom(X_*, N) for a resolution X_* -> M: C^j = Hom(X_j, N),
/// d^j(phi) = phi o (X_{j+1} -> X_j). Terms 0..res.length()-1.
struct HomComplex {
  std::vector<HomSpace> spaces;
  CochainComplex complex;
};

inline HomComplex hom_from_resolution(const Resolution& res, const ModuleRep& n) {
  const std::size_t len = res.length();
  HomComplex out{{}, {n.field(), {}, {}}};
  for (std::size_t j = 0; j < len; ++j) out.spaces.emplace_back(res.term(j), n);
  for (auto& s : out.spaces) out.complex.dims.push_back(s.dim());
  for (std::size_t j = 0; j + 1 < len; ++j) {
    ModuleMap dj = res.differential(j);
    std::vector<Matrix> imgs;
    for (const auto& phi : out.spaces[j].basis()) imgs.push_back(phi.matrix() * dj.matrix());
    out.complex.d.push_back(detail::coordinate_columns(out.spaces[j + 1], imgs));
  }
  return out;
}

/// Hom(M, Y^*) for a coresolution N -> Y^*: C^j = Hom(M, Y^j),
/// d^j(psi) = (Y^j -> Y^{j+1}) o psi.
inline HomComplex hom_into_coresolution(const ModuleRep& m, const Resolution& co) {
  const std::size_t len = co.length();
  HomComplex out{{}, {m.field(), {}, {}}};
  for (std::size_t j = 0; j < len; ++j) out.spaces.emplace_back(m, co.term(j));
  for (auto& s : out.spaces) out.complex.dims.push_back(s.dim());
  for (std::size_t j = 0; j + 1 < len; ++j) {
    ModuleMap dj = co.differential(j);
    std::vector<Matrix> imgs;
    for (const auto& psi : out.spaces[j].basis()) imgs.push_back(dj.matrix() * psi.matrix());
    out.complex.d.push_back(detail::coordinate_columns(out.spaces[j + 1], imgs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ext_XY.

struct ExtRow {
  std::size_t via_x = 0;
  std::size_t via_y = 0;
  std::size_t absolute = 0;
};

struct ExtTable {
  std::string triple;
  std::string m_name, n_name;
  std::vector<ExtRow> rows;
  bool balanced() const {
    for (const auto& r : rows)
      if (r.via_x != r.via_y) return false;
    return true;
  }
};

/// Rows 0..imax. Throws BalanceViolation if the two relative columns differ.
inline ExtTable ext_xy(const CotorsionTriple& t, const ModuleRep& m, const ModuleRep& n, std::size_t imax,
                       bool assert_balance = true) {
  m.require_same_algebra(n);
  ExtTable table{t.name(), "", "", {}};
  Resolution xr = proper_x_resolution(t, m, imax + 2);
  Resolution yr = proper_y_coresolution(t, n, imax + 2);
  auto hx = hom_from_resolution(xr, n);
  auto hy = hom_into_coresolution(m, yr);
  for (std::size_t i = 0; i <= imax; ++i)
    table.rows.push_back({hx.complex.cohomology(i), hy.complex.cohomology(i), ext_dim(m, n, i)});
  if (assert_balance)
    for (std::size_t i = 0; i <= imax; ++i)
      if (table.rows[i].via_x != table.rows[i].via_y) throw BalanceViolation(i);
  return table;
}

// ---------------------------------------------------------------------------
// Z-projective and Z-injective dimension.

struct RelativeDim {
  BoundedDim by_resolution;   // smallest n with the n-th proper (co)syzygy in X (resp. Y)
  BoundedDim by_registry;     // smallest n with registry Ext vanishing in degrees n+1..n+3
  bool agree() const { return by_resolution == by_registry; }
};

namespace detail {

/// Smallest n <= bound with ext(n + i) = 0 for 1 <= i <= window.
template <class ExtFn>
BoundedDim smallest_vanishing(std::size_t bound, std::size_t window, ExtFn&& ext) {
  for (std::size_t n = 0; n <= bound; ++n) {
    bool ok = true;
    for (std::size_t i = 1; i <= window && ok; ++i) ok = ext(n + i) == 0;
    if (ok) return BoundedDim::exactly(n, bound);
  }
  return BoundedDim::exceeds(bound);
}

}  // namespace detail

/// Z-pd(M): the algorithm reads off the first proper X-syzygy in X; the
/// registry column uses Ext^{n+i}(M, Z) = 0 for registered Z-members.
inline RelativeDim z_pd(const CotorsionTriple& t, const ModuleRep& m, std::size_t bound,
                        const std::vector<ModuleRep>& registry_z = {}, std::size_t window = 3) {
  RelativeDim out{BoundedDim::exceeds(bound), BoundedDim::exceeds(bound)};
  for (std::size_t n = 0; n <= bound; ++n) {
    Resolution r = proper_x_resolution(t, m, n);
    if (t.in_X(r.syzygy(n))) {
      out.by_resolution = BoundedDim::exactly(n, bound);
      break;
    }
  }
  out.by_registry = detail::smallest_vanishing(bound, window, [&](std::size_t deg) {
    std::size_t s = 0;
    for (const auto& z : registry_z) s += ext_dim(m, z, deg);
    return s;
  });
  return out;
}

inline RelativeDim z_id(const CotorsionTriple& t, const ModuleRep& n_mod, std::size_t bound,
                        const std::vector<ModuleRep>& registry_z = {}, std::size_t window = 3) {
  RelativeDim out{BoundedDim::exceeds(bound), BoundedDim::exceeds(bound)};
  for (std::size_t n = 0; n <= bound; ++n) {
    Resolution r = proper_y_coresolution(t, n_mod, n);
    if (t.in_Y(r.syzygy(n))) {
      out.by_resolution = BoundedDim::exactly(n, bound);
      break;
    }
  }
  out.by_registry = detail::smallest_vanishing(bound, window, [&](std::size_t deg) {
    std::size_t s = 0;
    for (const auto& z : registry_z) s += ext_dim(z, n_mod, deg);
    return s;
  });
  return out;
}

// ---------------------------------------------------------------------------
// X-id and Y-pd: registry-bounded dichotomy test.

enum class DegenerateHorn { zero, infinite_within_bound, intermediate };

inline const char* to_string(DegenerateHorn h) {
  switch (h) {
    case DegenerateHorn::zero: return "0";
    case DegenerateHorn::infinite_within_bound: return "inf-within-bound";
    case DegenerateHorn::intermediate: return "intermediate";
  }
  return "?";
}

struct DegenerateReport {
  BoundedDim x_id;  // registry X-injective dimension of M
  BoundedDim y_pd;  // registry Y-projective dimension of M
  DegenerateHorn x_horn = DegenerateHorn::zero;
  DegenerateHorn y_horn = DegenerateHorn::zero;
  bool ok() const { return x_horn != DegenerateHorn::intermediate && y_horn != DegenerateHorn::intermediate; }
};

inline DegenerateHorn horn_of(const BoundedDim& d) {
  if (d.exceeds_bound()) return DegenerateHorn::infinite_within_bound;
  return *d.value == 0 ? DegenerateHorn::zero : DegenerateHorn::intermediate;
}

inline DegenerateReport xy_degenerate_dims(const ModuleRep& m, const std::vector<ModuleRep>& registry_x,
                                           const std::vector<ModuleRep>& registry_y, std::size_t bound,
                                           std::size_t window = 3) {
  DegenerateReport r;
  r.x_id = detail::smallest_vanishing(bound, window, [&](std::size_t deg) {
    std::size_t s = 0;
    for (const auto& x : registry_x) s += ext_dim(x, m, deg);
    return s;
  });
  r.y_pd = detail::smallest_vanishing(bound, window, [&](std::size_t deg) {
    std::size_t s = 0;
    for (const auto& y : registry_y) s += ext_dim(m, y, deg);
    return s;
  });
  r.x_horn = horn_of(r.x_id);
  r.y_horn = horn_of(r.y_pd);
  return r;
}

// ---------------------------------------------------------------------------
// Long exact sequences.

/// 0 -> U -> V -> W -> 0, f: U -> V and g: V -> W chain maps (per degree).
struct ComplexSES {
  CochainComplex u, v, w;
  std::vector<Matrix> f, g;
};

struct LesNode {
  std::string label;  // e.g. "H^2(V)"
  bool exact = false;
};

struct LesReport {
  std::vector<std::size_t> hu, hv, hw;
  std::vector<Matrix> connecting;  // delta^j on cocycle bases of W^j, valued in U^{j+1}
  std::vector<LesNode> nodes;
  bool rows_exact = false;
  bool exact() const {
    if (!rows_exact) return false;
    for (const auto& n : nodes)
      if (!n.exact) return false;
    return true;
  }
  std::optional<std::string> first_failure() const {
    if (!rows_exact) return "rows";
    for (const auto& n : nodes)
      if (!n.exact) return n.label;
    return std::nullopt;
  }
};

namespace detail {

/// {x : a x in span(s)} as column basis.
inline Matrix preimage(const Matrix& a, const Matrix& s) {
  if (a.cols() == 0) return a;
  Matrix sys = hstack(a, -s);
  Matrix k = kernel_matrix(sys);
  return column_space(k.block(0, 0, a.cols(), k.cols()));
}

inline Matrix span_sum(const Matrix& a, const Matrix& b) { return column_space(hstack(a, b)); }

inline bool same_subspace(const Matrix& a, const Matrix& b) {
  const std::size_t ra = rank(a), rb = rank(b);
  return ra == rb && rank(hstack(a, b)) == ra;
}

}  // namespace detail

/// Snake-lemma connecting maps and exactness at every node of
/// H^0(U) -> H^0(V) -> H^0(W) -> H^1(U) -> ... -> H^top(W), where
/// top = (number of differentials) - 1.
inline LesReport long_exact_sequence(const ComplexSES& s) {
  LesReport rep;
  const std::size_t top = s.u.d.size();  // degrees 0..top-1 have cohomology
  const PrimeField fld = s.u.field;
  rep.rows_exact = s.u.is_complex() && s.v.is_complex() && s.w.is_complex();
  for (std::size_t j = 0; j < s.u.length() && rep.rows_exact; ++j) {
    const Matrix& f = s.f[j];
    const Matrix& g = s.g[j];
    if (rank(f) != s.u.dims[j] || rank(g) != s.w.dims[j] || !(g * f).is_zero() ||
        s.v.dims[j] != s.u.dims[j] + s.w.dims[j])
      rep.rows_exact = false;
    if (j < top && (!(s.v.d[j] * f == s.f[j + 1] * s.u.d[j]) || !(s.w.d[j] * g == s.g[j + 1] * s.v.d[j])))
      rep.rows_exact = false;
  }
  if (!rep.rows_exact) return rep;
  for (std::size_t j = 0; j < top; ++j) {
    rep.hu.push_back(s.u.cohomology(j));
    rep.hv.push_back(s.v.cohomology(j));
    rep.hw.push_back(s.w.cohomology(j));
  }
  // delta^j: lift a cocycle of W^j to V^j, apply d, pull back along f.
  for (std::size_t j = 0; j < top; ++j) {
    Matrix zw = s.w.cocycles(j);
    Matrix delta(fld, s.u.dims[j + 1], zw.cols());
    for (std::size_t c = 0; c < zw.cols(); ++c) {
      auto lift = solve(s.g[j], zw.column(c));
      if (!lift) throw std::logic_error("connecting map: g is not surjective");
      auto dv = s.v.d[j] * Matrix::from_columns(fld, s.v.dims[j], {*lift});
      auto u = solve(s.f[j + 1], dv.column(0));
      if (!u) throw std::logic_error("connecting map: d(lift) is not in the image of f");
      for (std::size_t r = 0; r < u->size(); ++r) delta(r, c) = (*u)[r];
    }
    rep.connecting.push_back(std::move(delta));
  }
  auto node = [&](std::string label, const Matrix& kernel_side, const Matrix& image_side) {
    rep.nodes.push_back({std::move(label), detail::same_subspace(kernel_side, image_side)});
  };
  for (std::size_t j = 0; j < top; ++j) {
    const std::string deg = std::to_string(j);
    Matrix zu = s.u.cocycles(j), zv = s.v.cocycles(j), zw = s.w.cocycles(j);
    Matrix bu = s.u.coboundaries(j), bv = s.v.coboundaries(j), bw = s.w.coboundaries(j);
    // At H^j(U): ker f_* = im delta^{j-1}.
    {
      Matrix pre = detail::preimage(s.f[j] * zu, bv);
      Matrix ker = zu.cols() == 0 ? zu : zu * pre;
      Matrix img = bu;
      if (j > 0) img = detail::span_sum(bu, rep.connecting[j - 1]);
      node("H^" + deg + "(U)", detail::span_sum(ker, bu), img);
    }
    // At H^j(V): ker g_* = im f_*.
    {
      Matrix pre = detail::preimage(s.g[j] * zv, bw);
      Matrix ker = zv.cols() == 0 ? zv : zv * pre;
      node("H^" + deg + "(V)", detail::span_sum(ker, bv), detail::span_sum(s.f[j] * zu, bv));
    }
    // At H^j(W): ker delta^j = im g_*.
    {
      Matrix bu_next = s.u.coboundaries(j + 1);
      Matrix pre = detail::preimage(rep.connecting[j], bu_next);
      Matrix ker = zw.cols() == 0 ? zw : zw * pre;
      node("H^" + deg + "(W)", detail::span_sum(ker, bw), detail::span_sum(s.g[j] * zv, bw));
    }
  }
  return rep;
}

enum class LesVariant { first, second };

/// Exactness of Hom(X, -) on the sequence: the alternating sum of hom
/// dimensions vanishes (the left part is always exact).
inline bool hom_exact_from(const ModuleRep& x, const ShortExactSeq& s) {
  const long a = static_cast<long>(hom_space(x, s.first()).size());
  const long b = static_cast<long>(hom_space(x, s.middle()).size());
  const long c = static_cast<long>(hom_space(x, s.last()).size());
  return a - b + c == 0;
}

inline bool hom_exact_into(const ShortExactSeq& s, const ModuleRep& y) {
  const long a = static_cast<long>(hom_space(s.first(), y).size());
  const long b = static_cast<long>(hom_space(s.middle(), y).size());
  const long c = static_cast<long>(hom_space(s.last(), y).size());
  return a - b + c == 0;
}

/// Variant first: 0 -> M -> M' -> M'' -> 0 varies in the first argument and
/// Ext_XY(-, N) is computed against a proper Y-coresolution of N.
/// Variant second: 0 -> N -> N' -> N'' -> 0 varies in the second argument,
/// against a proper X-resolution of M. Degrees 0..imax are checked.
/// `registry` supplies the X (resp. Y) test objects for the properness
/// precondition; PreconditionViolation if it fails.
inline LesReport les_check(const CotorsionTriple& t, const ShortExactSeq& ses, const ModuleRep& fixed,
                           LesVariant variant, std::size_t imax, const std::vector<ModuleRep>& registry) {
  if (!ses.is_exact()) throw PreconditionViolation("les_check: sequence is not short exact");
  for (const auto& r : registry) {
    if (variant == LesVariant::first ? !hom_exact_from(r, ses) : !hom_exact_into(ses, r))
      throw PreconditionViolation("les_check: sequence is not proper for a registered test object");
  }
  ComplexSES c;
  const std::size_t len = imax + 2;
  if (variant == LesVariant::first) {
    Resolution co = proper_y_coresolution(t, fixed, len);
    auto hu = hom_into_coresolution(ses.last(), co);
    auto hv = hom_into_coresolution(ses.middle(), co);
    auto hw = hom_into_coresolution(ses.first(), co);
    c.u = hu.complex;
    c.v = hv.complex;
    c.w = hw.complex;
    for (std::size_t j = 0; j < len; ++j) {
      std::vector<Matrix> fi, gi;
      for (const auto& phi : hu.spaces[j].basis()) fi.push_back(phi.matrix() * ses.right.matrix());
      for (const auto& phi : hv.spaces[j].basis()) gi.push_back(phi.matrix() * ses.left.matrix());
      c.f.push_back(detail::coordinate_columns(hv.spaces[j], fi));
      c.g.push_back(detail::coordinate_columns(hw.spaces[j], gi));
    }
  } else {
    Resolution xr = proper_x_resolution(t, fixed, len);
    auto hu = hom_from_resolution(xr, ses.first());
    auto hv = hom_from_resolution(xr, ses.middle());
    auto hw = hom_from_resolution(xr, ses.last());
    c.u = hu.complex;
    c.v = hv.complex;
    c.w = hw.complex;
    for (std::size_t j = 0; j < len; ++j) {
      std::vector<Matrix> fi, gi;
      for (const auto& phi : hu.spaces[j].basis()) fi.push_back(ses.left.matrix() * phi.matrix());
      for (const auto& phi : hv.spaces[j].basis()) gi.push_back(ses.right.matrix() * phi.matrix());
      c.f.push_back(detail::coordinate_columns(hv.spaces[j], fi));
      c.g.push_back(detail::coordinate_columns(hw.spaces[j], gi));
    }
  }
  return long_exact_sequence(c);
}

// ---------------------------------------------------------------------------
// Global dimensions over a registry.

struct GlobalDims {
  BoundedDim z_pd_sup, z_id_sup;
  BoundedDim pd_sup_z, id_sup_z;  // over registered Z-members, absolute dimensions
  bool sups_agree() const { return z_pd_sup == z_id_sup; }
  /// sup <= n <=> all Z-members pd <= n <=> all Z-members id <= n, for every n.
  bool sup_matches_z_members() const { return z_pd_sup == pd_sup_z && z_pd_sup == id_sup_z; }
};

inline GlobalDims global_dims(const CotorsionTriple& t, const std::vector<ModuleRep>& registry, std::size_t bound) {
  std::vector<BoundedDim> pds, ids, zpd, zid;
  for (const auto& m : registry) {
    pds.push_back(z_pd(t, m, bound).by_resolution);
    ids.push_back(z_id(t, m, bound).by_resolution);
    if (t.in_Z(m)) {
      zpd.push_back(proj_dim(m, bound));
      zid.push_back(inj_dim(m, bound));
    }
  }
  return {sup(pds, bound), sup(ids, bound), sup(zpd, bound), sup(zid, bound)};
}

}  // namespace cotorsion
