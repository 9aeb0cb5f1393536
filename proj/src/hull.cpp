#include "toric/hull.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace toric {

namespace {

struct WorkFacet {
  std::vector<int> v;
  QVec n;
  Q off;
  bool alive = true;
};

bool lex_less(const QVec& a, const QVec& b) { return a < b; }

// Facets of a full-dimensional point set in Q^k, k >= 2, as merged hyperplanes.
std::vector<std::pair<QVec, Q>> full_dim_facets(const std::vector<QVec>& P, int k) {
  const int n = static_cast<int>(P.size());
  std::vector<int> simplex;
  simplex.push_back(static_cast<int>(std::min_element(P.begin(), P.end(), lex_less) - P.begin()));
  QMat diffs;
  for (int i = 0; i < n && static_cast<int>(simplex.size()) < k + 1; ++i) {
    QMat trial = diffs;
    trial.push_back(P[i] - P[simplex[0]]);
    if (rank(trial) == static_cast<int>(trial.size())) {
      diffs = trial;
      simplex.push_back(i);
    }
  }
  QVec c(k, Q(0));
  for (int i : simplex) c = c + P[i];
  c = Q(1, k + 1) * c;

  std::vector<WorkFacet> facets;
  std::map<std::vector<int>, std::vector<int>> ridges;

  auto add_facet = [&](std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    QMat rows;
    for (size_t j = 1; j < verts.size(); ++j) rows.push_back(P[verts[j]] - P[verts[0]]);
    QMat ns = nullspace(rows, k);
    QVec nv = primitive(ns.at(0));
    Q off = dot(nv, P[verts[0]]);
    if (dot(nv, c) > off) {
      for (auto& x : nv) x = -x;
      off = -off;
    }
    int id = static_cast<int>(facets.size());
    facets.push_back({verts, nv, off, true});
    for (size_t drop = 0; drop < verts.size(); ++drop) {
      std::vector<int> r;
      for (size_t j = 0; j < verts.size(); ++j)
        if (j != drop) r.push_back(verts[j]);
      ridges[r].push_back(id);
    }
  };

  for (int drop = 0; drop <= k; ++drop) {
    std::vector<int> verts;
    for (int j = 0; j <= k; ++j)
      if (j != drop) verts.push_back(simplex[j]);
    add_facet(verts);
  }

  std::set<int> in_simplex(simplex.begin(), simplex.end());
  for (int p = 0; p < n; ++p) {
    if (in_simplex.count(p)) continue;
    std::vector<int> visible;
    for (size_t f = 0; f < facets.size(); ++f)
      if (facets[f].alive && dot(facets[f].n, P[p]) > facets[f].off) visible.push_back(static_cast<int>(f));
    if (visible.empty()) continue;
    std::set<int> vis(visible.begin(), visible.end());
    std::vector<std::vector<int>> horizon;
    for (int f : visible) {
      const auto& verts = facets[f].v;
      for (size_t drop = 0; drop < verts.size(); ++drop) {
        std::vector<int> r;
        for (size_t j = 0; j < verts.size(); ++j)
          if (j != drop) r.push_back(verts[j]);
        auto& owners = ridges[r];
        bool shared_with_hidden = false;
        for (int g : owners)
          if (g != f && !vis.count(g)) shared_with_hidden = true;
        if (shared_with_hidden) horizon.push_back(r);
      }
    }
    for (int f : visible) {
      facets[f].alive = false;
      const auto& verts = facets[f].v;
      for (size_t drop = 0; drop < verts.size(); ++drop) {
        std::vector<int> r;
        for (size_t j = 0; j < verts.size(); ++j)
          if (j != drop) r.push_back(verts[j]);
        auto it = ridges.find(r);
        if (it == ridges.end()) continue;
        auto& owners = it->second;
        owners.erase(std::remove(owners.begin(), owners.end(), f), owners.end());
        if (owners.empty()) ridges.erase(it);
      }
    }
    for (auto& r : horizon) {
      r.push_back(p);
      add_facet(r);
    }
  }

  std::set<std::pair<QVec, Q>> merged;
  for (const auto& f : facets)
    if (f.alive) merged.insert({f.n, f.off});
  return {merged.begin(), merged.end()};
}

}  // namespace

Hull convex_hull(const std::vector<QVec>& pts, int ambient) {
  Hull h;
  h.ambient = ambient;
  if (pts.empty()) return h;
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != ambient)
      throw Error(ErrorKind::dimension_mismatch, "convex_hull: point of wrong dimension");

  std::map<QVec, int> first;
  std::vector<int> uniq;
  for (size_t i = 0; i < pts.size(); ++i)
    if (first.emplace(pts[i], static_cast<int>(i)).second) uniq.push_back(static_cast<int>(i));

  std::vector<QVec> upts;
  for (int i : uniq) upts.push_back(pts[i]);
  AffineHull ah = affine_hull(upts, ambient);
  const int k = ah.dim();
  h.dim = k;
  h.eq_normals = ah.normals;
  for (const auto& nv : ah.normals) h.eq_offsets.push_back(dot(nv, ah.origin));

  std::vector<QVec> P;
  for (const auto& p : upts) P.push_back(ah.project(p));

  auto lift_normal = [&](const QVec& a) {
    QVec out(ambient, Q(0));
    for (int i = 0; i < k; ++i) out[ah.pivots[i]] = a[i];
    return out;
  };

  std::vector<std::pair<QVec, Q>> planes;
  if (k == 0) {
    h.vertices = {uniq[0]};
    return h;
  }
  if (k == 1) {
    auto mm = std::minmax_element(P.begin(), P.end(), lex_less);
    planes.push_back({QVec{Q(-1)}, -(*mm.first)[0]});
    planes.push_back({QVec{Q(1)}, (*mm.second)[0]});
  } else {
    planes = full_dim_facets(P, k);
  }

  std::vector<std::vector<int>> tight(P.size());
  for (size_t f = 0; f < planes.size(); ++f)
    for (size_t i = 0; i < P.size(); ++i)
      if (dot(planes[f].first, P[i]) == planes[f].second) tight[i].push_back(static_cast<int>(f));

  std::vector<bool> is_vertex(P.size(), false);
  for (size_t i = 0; i < P.size(); ++i) {
    if (static_cast<int>(tight[i].size()) < k) continue;
    QMat normals;
    for (int f : tight[i]) normals.push_back(planes[f].first);
    is_vertex[i] = rank(normals) == k;
  }

  std::vector<int> verts;
  for (size_t i = 0; i < P.size(); ++i)
    if (is_vertex[i]) verts.push_back(static_cast<int>(i));
  std::sort(verts.begin(), verts.end(), [&](int a, int b) { return upts[a] < upts[b]; });
  for (int v : verts) h.vertices.push_back(uniq[v]);

  for (size_t f = 0; f < planes.size(); ++f) {
    Facet fc;
    fc.normal = lift_normal(planes[f].first);
    fc.offset = planes[f].second;
    for (int v : verts)
      if (dot(planes[f].first, P[v]) == planes[f].second) fc.vertices.push_back(uniq[v]);
    h.facets.push_back(fc);
  }
  return h;
}

Envelope upper_hull(const std::vector<QVec>& m, const QVec& t, int dim) {
  if (dim > 3) throw Error(ErrorKind::dimension_too_high, "upper_hull: exact path limited to dim <= 3");
  if (m.empty()) throw Error(ErrorKind::invalid_input, "upper_hull: no points");
  if (m.size() != t.size()) throw Error(ErrorKind::dimension_mismatch, "upper_hull: size mismatch");
  Envelope env;
  env.dim = dim;

  std::map<QVec, int> best;
  for (size_t i = 0; i < m.size(); ++i) {
    if (static_cast<int>(m[i].size()) != dim)
      throw Error(ErrorKind::dimension_mismatch, "upper_hull: point of wrong dimension");
    auto it = best.find(m[i]);
    if (it == best.end() || t[i] > t[it->second]) best[m[i]] = static_cast<int>(i);
  }
  std::vector<int> idx;
  std::vector<QVec> bm;
  for (const auto& [pt, i] : best) {
    idx.push_back(i);
    bm.push_back(pt);
  }
  Hull base = convex_hull(bm, dim);
  for (auto& v : base.vertices) v = idx[v];
  for (auto& f : base.facets)
    for (auto& v : f.vertices) v = idx[v];
  env.base = base;

  AffineHull ah = affine_hull(bm, dim);
  const int k = ah.dim();
  auto lift_slope = [&](const QVec& s) {
    QVec out(dim, Q(0));
    for (int i = 0; i < k; ++i) out[ah.pivots[i]] = s[i];
    return out;
  };

  if (k == 0) {
    EnvelopeCell c;
    c.vertices = {idx[0]};
    c.slope = QVec(dim, Q(0));
    c.constant = t[idx[0]];
    env.cells.push_back(c);
    env.vertices = {idx[0]};
    return env;
  }

  std::vector<QVec> L;
  for (size_t i = 0; i < bm.size(); ++i) {
    QVec p = ah.project(bm[i]);
    p.push_back(t[idx[i]]);
    L.push_back(p);
  }
  Hull lifted = convex_hull(L, k + 1);
  std::set<int> env_verts;
  if (lifted.dim == k) {
    const QVec& nv = lifted.eq_normals.at(0);
    const Q& o = lifted.eq_offsets.at(0);
    QVec s(k);
    for (int i = 0; i < k; ++i) s[i] = -nv[i] / nv[k];
    EnvelopeCell c;
    c.slope = lift_slope(s);
    c.constant = o / nv[k];
    for (int v : lifted.vertices) {
      c.vertices.push_back(idx[v]);
      env_verts.insert(v);
    }
    env.cells.push_back(c);
  } else {
    for (const auto& f : lifted.facets) {
      if (f.normal[k] <= 0) continue;
      QVec s(k);
      for (int i = 0; i < k; ++i) s[i] = -f.normal[i] / f.normal[k];
      EnvelopeCell c;
      c.slope = lift_slope(s);
      c.constant = f.offset / f.normal[k];
      for (int v : f.vertices) {
        c.vertices.push_back(idx[v]);
        env_verts.insert(v);
      }
      env.cells.push_back(c);
    }
  }
  std::vector<int> ev(env_verts.begin(), env_verts.end());
  std::sort(ev.begin(), ev.end(), [&](int a, int b) { return bm[a] < bm[b]; });
  for (int v : ev) env.vertices.push_back(idx[v]);
  return env;
}

}  // namespace toric
