#include "polyglue/peeling.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyglue {

const char* to_string(PeelKind kind) {
  switch (kind) {
    case PeelKind::kMergeComponents: return "merge-components";
    case PeelKind::kGenusMerge: return "genus-merge";
    case PeelKind::kSplitHole: return "split-hole";
    case PeelKind::kStrongClosure: return "strong-closure";
    case PeelKind::kWeakClosure: return "weak-closure";
    case PeelKind::kLoopClosure: return "loop-closure";
    case PeelKind::kBigonClosure: return "bigon-closure";
    case PeelKind::kLoopLoopMerge: return "loop-loop-merge";
  }
  return "?";
}

SurfaceState::SurfaceState(const Configuration& config, bool track_hole_min)
    : n_(static_cast<std::uint32_t>(config.half_total())),
      track_hole_min_(track_hole_min) {
  const auto m = static_cast<std::uint32_t>(config.total_sides());
  next_.resize(m);
  prev_.resize(m);
  hole_of_.resize(m);
  head_corner_.resize(m);
  boundary_.resize(m);
  boundary_pos_.resize(m);
  corner_parent_.resize(m);
  corner_rank_.assign(m, 0);
  position_of_.resize(m);

  const auto& perimeters = config.perimeters();
  holes_.reserve(perimeters.size());
  comp_parent_.resize(perimeters.size());
  comp_rank_.assign(perimeters.size(), 0);
  comp_data_.resize(perimeters.size());

  Dart offset = 0;
  for (std::uint32_t poly = 0; poly < perimeters.size(); ++poly) {
    const std::uint32_t p = perimeters[poly];
    for (std::uint32_t i = 0; i < p; ++i) {
      const Dart d = offset + i;
      next_[d] = (i + 1 < p) ? d + 1 : offset;
      prev_[d] = (i > 0) ? d - 1 : offset + p - 1;
      hole_of_[d] = poly;
      head_corner_[d] = d;
      corner_parent_[d] = d;
      position_of_[d] = d;
      boundary_[d] = d;
      boundary_pos_[d] = d;
    }
    comp_parent_[poly] = poly;
    comp_data_[poly] = CompData{1, p, 0, 0};
    holes_.push_back(Hole{p, poly, offset, offset, true});
    ++hole_count_;
    hole_attach(poly);
    offset += p;
  }
  if (tau_ == kNoStep && hole_count_ == 1) tau_ = 0;
}

std::uint32_t SurfaceState::hole_perimeter_of(Dart d) const {
  if (!on_boundary(d)) throw std::invalid_argument("hole_perimeter_of: dart not on boundary");
  return holes_[hole_of_[d]].size;
}

std::vector<std::uint32_t> SurfaceState::hole_perimeters() const {
  std::vector<std::uint32_t> out;
  out.reserve(hole_count_);
  for (const auto& hole : holes_)
    if (hole.alive) out.push_back(hole.size);
  return out;
}

Dart SurfaceState::random_other_boundary_dart(Dart excluded, RngStream& rng) const {
  const std::uint64_t s = boundary_.size();
  if (s < 2) throw std::logic_error("random_other_boundary_dart: boundary too small");
  std::uint64_t idx = rng.uniform_below(s - 1);
  if (idx >= boundary_pos_[excluded]) ++idx;
  return boundary_[idx];
}

Dart SurfaceState::min_dart_of_min_hole() const {
  if (!track_hole_min_)
    throw std::logic_error("min_dart_of_min_hole: hole-min tracking disabled");
  if (min_index_.empty()) throw std::logic_error("min_dart_of_min_hole: no holes");
  return min_index_.begin()->second;
}

std::uint32_t SurfaceState::corner_find(std::uint32_t c) const {
  while (corner_parent_[c] != c) {
    corner_parent_[c] = corner_parent_[corner_parent_[c]];
    c = corner_parent_[c];
  }
  return c;
}

std::uint32_t SurfaceState::corner_union(std::uint32_t a, std::uint32_t b) {
  a = corner_find(a);
  b = corner_find(b);
  if (a == b) return a;
  if (corner_rank_[a] < corner_rank_[b]) std::swap(a, b);
  corner_parent_[b] = a;
  if (corner_rank_[a] == corner_rank_[b]) ++corner_rank_[a];
  return a;
}

void SurfaceState::set_position(std::uint32_t root, Dart d) {
  position_of_[root] = d;
  head_corner_[d] = root;
}

std::uint32_t SurfaceState::comp_find(std::uint32_t p) const {
  while (comp_parent_[p] != p) {
    comp_parent_[p] = comp_parent_[comp_parent_[p]];
    p = comp_parent_[p];
  }
  return p;
}

std::uint32_t SurfaceState::comp_union(std::uint32_t a, std::uint32_t b) {
  if (a == b) return a;
  if (comp_rank_[a] < comp_rank_[b]) std::swap(a, b);
  comp_parent_[b] = a;
  if (comp_rank_[a] == comp_rank_[b]) ++comp_rank_[a];
  comp_data_[a].faces += comp_data_[b].faces;
  comp_data_[a].darts += comp_data_[b].darts;
  comp_data_[a].genus += comp_data_[b].genus;
  comp_data_[a].true_vertices += comp_data_[b].true_vertices;
  return a;
}

void SurfaceState::remove_dart(Dart d) {
  const std::uint32_t pos = boundary_pos_[d];
  boundary_[pos] = boundary_.back();
  boundary_pos_[boundary_[pos]] = pos;
  boundary_.pop_back();
  hole_of_[d] = kNoHole;
}

void SurfaceState::hole_detach(std::uint32_t h) {
  const Hole& hole = holes_[h];
  if (hole.size == 1) --loop_holes_;
  if (hole.size == 2) --bigon_holes_;
  if (track_hole_min_) min_index_.erase({hole.size, hole.min_dart});
}

void SurfaceState::hole_attach(std::uint32_t h) {
  const Hole& hole = holes_[h];
  if (hole.size == 1) ++loop_holes_;
  if (hole.size == 2) ++bigon_holes_;
  if (track_hole_min_) min_index_.insert({hole.size, hole.min_dart});
}

void SurfaceState::retire_hole(std::uint32_t h) {
  hole_detach(h);
  holes_[h].alive = false;
  --hole_count_;
}

std::uint32_t SurfaceState::new_hole(std::uint32_t component, std::uint32_t size,
                                     Dart any, Dart min_dart) {
  holes_.push_back(Hole{size, component, any, min_dart, true});
  ++hole_count_;
  const auto id = static_cast<std::uint32_t>(holes_.size() - 1);
  hole_attach(id);
  return id;
}

Dart SurfaceState::scan_min(Dart start, Dart skip1, Dart skip2) const {
  Dart best = kNoDart;
  Dart d = start;
  do {
    if (d != skip1 && d != skip2 && (best == kNoDart || d < best)) best = d;
    d = next_[d];
  } while (d != start);
  return best;
}

PeelEvent SurfaceState::peel(Dart a, Dart b) {
  if (a == b) throw std::invalid_argument("peel: peeled and partner must differ");
  const auto m = static_cast<Dart>(next_.size());
  if (a >= m || b >= m || !on_boundary(a) || !on_boundary(b))
    throw std::invalid_argument("peel: dart not on the boundary");

  const std::uint32_t ha = hole_of_[a];
  const std::uint32_t hb = hole_of_[b];
  const std::uint32_t pa_perim = holes_[ha].size;
  const std::uint32_t pb_perim = holes_[hb].size;

  PeelEvent ev;
  ev.step = step_;
  ev.peeled = a;
  ev.partner = b;
  ev.same_hole = (ha == hb);
  ev.peeled_perimeter = pa_perim;
  ev.partner_perimeter = pb_perim;

  const Dart pa = prev_[a], na = next_[a];
  const Dart pb = prev_[b], nb = next_[b];
  const std::uint32_t ca_plus = head_corner_[a];    // corner after a
  const std::uint32_t ca_minus = head_corner_[pa];  // corner before a
  const std::uint32_t cb_plus = head_corner_[b];
  const std::uint32_t cb_minus = head_corner_[pb];

  std::uint32_t deaths = 0;
  auto kill = [&](std::uint32_t root, std::uint32_t comp_root) {
    position_of_[root] = kNoDart;
    ++true_vertices_;
    ++comp_data_[comp_root].true_vertices;
    ++deaths;
  };

  if (ha == hb) {
    const std::uint32_t comp_root = comp_find(holes_[ha].component);
    if (pa_perim == 2) {
      ev.kind = PeelKind::kBigonClosure;
      kill(corner_find(ca_plus), comp_root);
      kill(corner_find(cb_plus), comp_root);
      remove_dart(a);
      remove_dart(b);
      retire_hole(ha);
    } else if (b == na) {
      // Partner is the next edge: the corner between them closes.
      ev.kind = PeelKind::kStrongClosure;
      kill(corner_find(ca_plus), comp_root);
      const std::uint32_t r = corner_union(ca_minus, cb_plus);
      next_[pa] = nb;
      prev_[nb] = pa;
      set_position(r, pa);
      remove_dart(a);
      remove_dart(b);
      hole_detach(ha);
      Hole& hole = holes_[ha];
      hole.size = pa_perim - 2;
      hole.any_dart = pa;
      if (track_hole_min_ && (hole.min_dart == a || hole.min_dart == b))
        hole.min_dart = scan_min(pa, kNoDart, kNoDart);
      hole_attach(ha);
    } else if (a == nb) {
      ev.kind = PeelKind::kWeakClosure;
      kill(corner_find(cb_plus), comp_root);
      const std::uint32_t r = corner_union(ca_plus, cb_minus);
      next_[pb] = na;
      prev_[na] = pb;
      set_position(r, pb);
      remove_dart(a);
      remove_dart(b);
      hole_detach(ha);
      Hole& hole = holes_[ha];
      hole.size = pa_perim - 2;
      hole.any_dart = pb;
      if (track_hole_min_ && (hole.min_dart == a || hole.min_dart == b))
        hole.min_dart = scan_min(pb, kNoDart, kNoDart);
      hole_attach(ha);
    } else {
      // Generic split: arc1 = na..pb, arc2 = nb..pa, both non-empty.
      ev.kind = PeelKind::kSplitHole;
      const std::uint32_t r1 = corner_union(ca_plus, cb_minus);
      const std::uint32_t r2 = corner_union(ca_minus, cb_plus);
      next_[pb] = na;
      prev_[na] = pb;
      set_position(r1, pb);
      next_[pa] = nb;
      prev_[nb] = pa;
      set_position(r2, pa);
      remove_dart(a);
      remove_dart(b);
      hole_detach(ha);

      // Lockstep walk of both arcs; the one that wraps first is relabeled.
      Dart w1 = na, w2 = nb;
      std::uint32_t walked = 1;
      bool arc1_shorter;
      while (true) {
        const Dart n1 = next_[w1], n2 = next_[w2];
        if (n1 == na) {
          arc1_shorter = true;
          break;
        }
        if (n2 == nb) {
          arc1_shorter = false;
          break;
        }
        w1 = n1;
        w2 = n2;
        ++walked;
      }
      const std::uint32_t short_size = walked;
      const std::uint32_t long_size = pa_perim - 2 - short_size;
      const Dart short_start = arc1_shorter ? na : nb;
      const Dart long_start = arc1_shorter ? nb : na;
      ev.split_first = arc1_shorter ? short_size : long_size;
      ev.split_second = arc1_shorter ? long_size : short_size;

      const auto new_id = static_cast<std::uint32_t>(holes_.size());
      Dart short_min = kNoDart;
      Dart d = short_start;
      do {
        hole_of_[d] = new_id;
        if (short_min == kNoDart || d < short_min) short_min = d;
        d = next_[d];
      } while (d != short_start);

      Hole& hole = holes_[ha];
      hole.size = long_size;
      hole.any_dart = long_start;
      if (track_hole_min_ &&
          (hole.min_dart == a || hole.min_dart == b || hole_of_[hole.min_dart] != ha))
        hole.min_dart = scan_min(long_start, kNoDart, kNoDart);
      hole_attach(ha);
      new_hole(hole.component, short_size, short_start, short_min);
    }
  } else {
    // Different holes: component bookkeeping first so vertex attribution
    // lands on the merged component.
    const std::uint32_t comp_a = comp_find(holes_[ha].component);
    const std::uint32_t comp_b = comp_find(holes_[hb].component);
    std::uint32_t comp_root;
    if (comp_a == comp_b) {
      ev.kind = PeelKind::kGenusMerge;
      comp_root = comp_a;
      ++comp_data_[comp_root].genus;
    } else {
      ev.kind = PeelKind::kMergeComponents;
      comp_root = comp_union(comp_a, comp_b);
    }

    if (pa_perim == 1 && pb_perim == 1) {
      const bool red_involved =
          red_active_ && (corner_find(red_corner_) == corner_find(ca_plus) ||
                          corner_find(red_corner_) == corner_find(cb_plus));
      ev.kind = red_involved ? PeelKind::kLoopClosure : PeelKind::kLoopLoopMerge;
      kill(corner_union(ca_plus, cb_plus), comp_root);
      remove_dart(a);
      remove_dart(b);
      retire_hole(ha);
      retire_hole(hb);
    } else if (pa_perim == 1) {
      // The loop's single corner is both endpoints of a: it merges with both
      // corners around b.
      std::uint32_t r = corner_union(ca_plus, cb_plus);
      r = corner_union(r, cb_minus);
      next_[pb] = nb;
      prev_[nb] = pb;
      set_position(r, pb);
      remove_dart(a);
      remove_dart(b);
      retire_hole(ha);
      hole_detach(hb);
      Hole& hole = holes_[hb];
      hole.size = pb_perim - 1;
      hole.any_dart = pb;
      if (track_hole_min_ && hole.min_dart == b)
        hole.min_dart = scan_min(pb, kNoDart, kNoDart);
      hole_attach(hb);
    } else if (pb_perim == 1) {
      std::uint32_t r = corner_union(cb_plus, ca_plus);
      r = corner_union(r, ca_minus);
      next_[pa] = na;
      prev_[na] = pa;
      set_position(r, pa);
      remove_dart(a);
      remove_dart(b);
      retire_hole(hb);
      hole_detach(ha);
      Hole& hole = holes_[ha];
      hole.size = pa_perim - 1;
      hole.any_dart = pa;
      if (track_hole_min_ && hole.min_dart == a)
        hole.min_dart = scan_min(pa, kNoDart, kNoDart);
      hole_attach(ha);
    } else {
      // Merge of two holes with perimeters >= 2. Relabel the smaller side
      // and fix the minima before splicing, while both cycles are intact.
      const std::uint32_t keep = (pa_perim >= pb_perim) ? ha : hb;
      const std::uint32_t away = (keep == ha) ? hb : ha;
      const Dart keep_removed = (keep == ha) ? a : b;
      const Dart away_removed = (keep == ha) ? b : a;

      Dart merged_min = kNoDart;
      if (track_hole_min_) {
        Dart keep_min = holes_[keep].min_dart;
        if (keep_min == keep_removed)
          keep_min = scan_min(next_[keep_removed], keep_removed, kNoDart);
        Dart away_min = holes_[away].min_dart;
        if (away_min == away_removed)
          away_min = scan_min(next_[away_removed], away_removed, kNoDart);
        merged_min = std::min(keep_min, away_min);
      }
      for (Dart d = next_[away_removed]; d != away_removed; d = next_[d])
        hole_of_[d] = keep;

      const std::uint32_t r1 = corner_union(ca_plus, cb_minus);
      const std::uint32_t r2 = corner_union(ca_minus, cb_plus);
      next_[pb] = na;
      prev_[na] = pb;
      set_position(r1, pb);
      next_[pa] = nb;
      prev_[nb] = pa;
      set_position(r2, pa);
      remove_dart(a);
      remove_dart(b);
      retire_hole(away);
      hole_detach(keep);
      Hole& hole = holes_[keep];
      hole.size = pa_perim + pb_perim - 2;
      hole.any_dart = pa;
      hole.min_dart = merged_min;
      hole_attach(keep);
    }
  }

  post_step_bookkeeping(ev, deaths);
  return ev;
}

void SurfaceState::post_step_bookkeeping(PeelEvent& ev, std::uint32_t deaths) {
  ev.vertices_created = static_cast<std::uint8_t>(deaths);

  if (red_active_ && !live_labels_.empty()) {
    const std::uint32_t red_root = corner_find(red_corner_);
    for (std::size_t i = 0; i < live_labels_.size();) {
      const std::uint32_t label = live_labels_[i];
      if (corner_find(label_corner_[label]) == red_root) {
        label_fates_[label].sigma_step = step_;
        live_labels_[i] = live_labels_.back();
        live_labels_.pop_back();
      } else {
        ++i;
      }
    }
  }
  for (std::size_t i = 0; i < live_labels_.size();) {
    const std::uint32_t label = live_labels_[i];
    if (position_of_[corner_find(label_corner_[label])] == kNoDart) {
      label_fates_[label].swallowed_step = step_;
      label_fates_[label].swallow_kind = ev.kind;
      live_labels_[i] = live_labels_.back();
      live_labels_.pop_back();
    } else {
      ++i;
    }
  }

  if (red_active_ && position_of_[corner_find(red_corner_)] == kNoDart) {
    red_active_ = false;
    ev.red_swallowed = true;
  }

  ++step_;
  if (tau_ == kNoStep && hole_count_ == 1) tau_ = step_;
  ev.holes = hole_count_;
  ev.loop_holes = loop_holes_;
  ev.bigon_holes = bigon_holes_;
  ev.true_vertices = true_vertices_;
}

void SurfaceState::init_red(Dart position) {
  if (!on_boundary(position)) throw std::invalid_argument("init_red: dart not on boundary");
  red_corner_ = head_corner_[position];
  red_active_ = true;
}

void SurfaceState::resample_red(Dart position) {
  if (!on_boundary(position))
    throw std::invalid_argument("resample_red: dart not on boundary");
  red_corner_ = head_corner_[position];
  red_active_ = true;
  // A freshly resampled marker may land on a tracked vertex.
  const std::uint32_t red_root = corner_find(red_corner_);
  for (std::size_t i = 0; i < live_labels_.size();) {
    const std::uint32_t label = live_labels_[i];
    if (corner_find(label_corner_[label]) == red_root) {
      label_fates_[label].sigma_step = step_ - 1;
      live_labels_[i] = live_labels_.back();
      live_labels_.pop_back();
    } else {
      ++i;
    }
  }
}

Dart SurfaceState::red_position() const {
  if (!red_active_) throw std::logic_error("red_position: red marker inactive");
  const Dart d = position_of_[corner_find(red_corner_)];
  if (d == kNoDart) throw std::logic_error("red_position: red corner closed");
  return d;
}

bool SurfaceState::red_on_loop() const {
  return holes_[hole_of_[red_position()]].size == 1;
}

void SurfaceState::attach_label(std::uint32_t label_count) {
  label_corner_.assign(label_count, 0);
  label_fates_.assign(label_count, LabelFate{});
  live_labels_.clear();
}

void SurfaceState::place_label(std::uint32_t label, Dart d, bool head) {
  if (!on_boundary(d)) throw std::invalid_argument("place_label: dart not on boundary");
  label_corner_[label] = head ? head_corner_[d] : head_corner_[prev_[d]];
  live_labels_.push_back(label);
}

MapSummary SurfaceState::final_summary() const {
  if (!done()) throw std::logic_error("final_summary: exploration not finished");
  MapSummary out;
  std::vector<char> seen(comp_parent_.size(), 0);
  for (std::uint32_t poly = 0; poly < comp_parent_.size(); ++poly) {
    const std::uint32_t root = comp_find(poly);
    if (seen[root]) continue;
    seen[root] = 1;
    const CompData& cd = comp_data_[root];
    ComponentSummary cs;
    cs.vertices = cd.true_vertices;
    cs.faces = cd.faces;
    cs.edges = cd.darts / 2;
    cs.genus = cd.genus;
    const auto euler = static_cast<std::int64_t>(cs.vertices) -
                       static_cast<std::int64_t>(cs.edges) +
                       static_cast<std::int64_t>(cs.faces);
    if (euler != 2 - 2 * static_cast<std::int64_t>(cs.genus))
      throw std::logic_error("final_summary: Euler relation violated");
    out.components.push_back(cs);
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

void SurfaceState::check_invariants() const {
  if (boundary_.size() != static_cast<std::size_t>(2 * n_) - 2 * static_cast<std::size_t>(step_))
    throw std::logic_error("invariant: |boundary| != 2n - 2i");

  std::uint32_t holes_seen = 0, loops_seen = 0, bigons_seen = 0;
  std::vector<char> visited(next_.size(), 0);
  for (const Dart d : boundary_) {
    if (boundary_[boundary_pos_[d]] != d) throw std::logic_error("invariant: boundary index");
    const std::uint32_t h = hole_of_[d];
    if (h == kNoHole || !holes_[h].alive) throw std::logic_error("invariant: dead hole");
    const std::uint32_t root = corner_find(head_corner_[d]);
    if (position_of_[root] != d) throw std::logic_error("invariant: corner position mismatch");
    if (visited[d]) continue;
    // Walk the hole cycle once.
    std::uint32_t size = 0;
    Dart min_dart = d;
    Dart e = d;
    do {
      if (hole_of_[e] != h) throw std::logic_error("invariant: hole membership");
      if (next_[prev_[e]] != e || prev_[next_[e]] != e)
        throw std::logic_error("invariant: linked list");
      visited[e] = 1;
      min_dart = std::min(min_dart, e);
      ++size;
      e = next_[e];
    } while (e != d);
    if (size != holes_[h].size) throw std::logic_error("invariant: hole size");
    if (track_hole_min_ && holes_[h].min_dart != min_dart)
      throw std::logic_error("invariant: hole min dart");
    ++holes_seen;
    if (size == 1) ++loops_seen;
    if (size == 2) ++bigons_seen;
  }
  if (holes_seen != hole_count_ || loops_seen != loop_holes_ || bigons_seen != bigon_holes_)
    throw std::logic_error("invariant: hole counters");

  std::uint64_t faces = 0, darts = 0;
  std::vector<char> seen(comp_parent_.size(), 0);
  for (std::uint32_t poly = 0; poly < comp_parent_.size(); ++poly) {
    const std::uint32_t root = comp_find(poly);
    if (seen[root]) continue;
    seen[root] = 1;
    faces += comp_data_[root].faces;
    darts += comp_data_[root].darts;
  }
  if (faces != comp_parent_.size() || darts != next_.size())
    throw std::logic_error("invariant: component totals");
}

namespace {

class MinHoleStrategy final : public PeelStrategy {
 public:
  Dart choose(SurfaceState& state) override { return state.min_dart_of_min_hole(); }
  bool needs_hole_min() const override { return true; }
  const char* name() const override { return "min-hole"; }
};

class UniformStrategy final : public PeelStrategy {
 public:
  explicit UniformStrategy(RngStream rng) : rng_(rng) {}
  Dart choose(SurfaceState& state) override {
    return state.boundary_dart(rng_.uniform_below(state.boundary_size()));
  }
  RngStream* aux_rng() override { return &rng_; }
  const char* name() const override { return "uniform"; }

 private:
  RngStream rng_;
};

class RedVertexStrategy final : public PeelStrategy {
 public:
  explicit RedVertexStrategy(RngStream rng) : rng_(rng) {}
  Dart choose(SurfaceState& state) override { return state.red_position(); }
  bool needs_red() const override { return true; }
  RngStream* aux_rng() override { return &rng_; }
  const char* name() const override { return "red-vertex"; }

 private:
  RngStream rng_;
};

}  // namespace

std::unique_ptr<PeelStrategy> strategy_min_hole() {
  return std::make_unique<MinHoleStrategy>();
}
std::unique_ptr<PeelStrategy> strategy_uniform(RngStream rng) {
  return std::make_unique<UniformStrategy>(rng);
}
std::unique_ptr<PeelStrategy> strategy_red_vertex(RngStream rng) {
  return std::make_unique<RedVertexStrategy>(rng);
}

void track_labels(SurfaceState& state, std::uint32_t k, RngStream& rng) {
  if (2 * static_cast<std::uint64_t>(k) > state.boundary_size())
    throw std::invalid_argument("track_labels: 2k exceeds the number of boundary corners");
  std::vector<Dart> pool(state.boundary_darts());
  state.attach_label(2 * k);
  for (std::uint32_t j = 0; j < k; ++j) {
    const std::uint64_t i =
        j + rng.uniform_below(static_cast<std::uint64_t>(pool.size()) - j);
    std::swap(pool[j], pool[i]);
    state.place_label(2 * j, pool[j], /*head=*/false);
    state.place_label(2 * j + 1, pool[j], /*head=*/true);
  }
}

PeelRunResult run(const Configuration& config, PeelStrategy& strategy,
                  const PeelRunOptions& options, RngStream& pairing_rng,
                  RngStream* label_rng) {
  SurfaceState state(config, strategy.needs_hole_min());
  TrajectoryLog log;
  log.n = static_cast<std::uint32_t>(config.half_total());
  log.polygon_count = config.polygon_count();
  log.sup_loops = state.loop_hole_count();
  log.sup_bigons = state.bigon_hole_count();

  if (options.track_k > 0) {
    if (label_rng == nullptr)
      throw std::invalid_argument("run: track_k requires a label rng");
    track_labels(state, options.track_k, *label_rng);
  }

  Permutation alpha;
  if (options.mode == PeelMode::kPresampled)
    alpha = sample_pairing(static_cast<std::uint32_t>(config.total_sides()), pairing_rng);

  RngStream* aux = strategy.aux_rng();
  if (strategy.needs_red()) {
    if (aux == nullptr) throw std::logic_error("run: red strategy without aux rng");
    state.init_red(state.boundary_dart(aux->uniform_below(state.boundary_size())));
  }

  std::int64_t prev_loops = state.loop_hole_count();
  std::int64_t prev_lb = prev_loops + state.bigon_hole_count();

  while (!state.done()) {
    if (options.stop_at_single_hole && state.hole_count() == 1) break;
    const Dart a = strategy.choose(state);
    const Dart b = (options.mode == PeelMode::kPresampled)
                       ? alpha[a]
                       : state.random_other_boundary_dart(a, pairing_rng);
    PeelEvent ev = state.peel(a, b);
    if (ev.red_swallowed && strategy.needs_red() && !state.done()) {
      state.resample_red(state.boundary_dart(aux->uniform_below(state.boundary_size())));
      ev.red_resampled = true;
    }

    if (ev.peeled_perimeter == 1) ++log.peeled_loop_steps;
    if (ev.peeled_perimeter == 2) ++log.peeled_bigon_steps;
    log.sup_loops = std::max(log.sup_loops, ev.loop_holes);
    log.sup_bigons = std::max(log.sup_bigons, ev.bigon_holes);
    const std::int64_t loops_now = ev.loop_holes;
    const std::int64_t lb_now = loops_now + ev.bigon_holes;
    log.max_delta_loops =
        std::max<std::int32_t>(log.max_delta_loops, static_cast<std::int32_t>(loops_now - prev_loops));
    log.max_delta_loops_bigons =
        std::max<std::int32_t>(log.max_delta_loops_bigons, static_cast<std::int32_t>(lb_now - prev_lb));
    prev_loops = loops_now;
    prev_lb = lb_now;

    if (ev.red_swallowed) {
      if (ev.kind == PeelKind::kLoopClosure)
        log.loop_closure_steps.push_back(ev.step);
      else
        log.strong_closure_steps.push_back(ev.step);
    }
    if (options.record_events) log.events.push_back(ev);
  }

  log.tau = state.tau();
  log.labels = state.label_fates();
  log.true_vertices_at_stop = state.true_vertices();
  log.steps_run = state.step();

  PeelRunResult result;
  result.completed = state.done();
  if (result.completed) result.summary = state.final_summary();
  result.log = std::move(log);
  return result;
}

ClosureReport closure_report(const TrajectoryLog& log) {
  ClosureReport report;
  report.n = log.n;
  report.strong_steps = log.strong_closure_steps;
  report.loop_steps = log.loop_closure_steps;
  report.labels = log.labels;
  double previous = 0.0;  // theta^(0) = 0
  for (const std::uint32_t theta : report.strong_steps) {
    const double t = static_cast<double>(theta);
    report.increment_ratios.push_back((t - previous) /
                                      (static_cast<double>(log.n) - previous));
    previous = t;
  }
  return report;
}

MonitorReport monitors(const TrajectoryLog& log) {
  MonitorReport r;
  r.sup_loops = log.sup_loops;
  r.sup_bigons = log.sup_bigons;
  r.peeled_loop_steps = log.peeled_loop_steps;
  r.peeled_bigon_steps = log.peeled_bigon_steps;
  r.first_loop_closure =
      log.loop_closure_steps.empty() ? kNoStep : log.loop_closure_steps.front();
  r.max_delta_loops = log.max_delta_loops;
  r.max_delta_loops_bigons = log.max_delta_loops_bigons;
  return r;
}

}  // namespace polyglue
