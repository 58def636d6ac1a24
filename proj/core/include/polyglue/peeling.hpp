#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "polyglue/rng.hpp"
#include "polyglue/surface.hpp"

namespace polyglue {

inline constexpr std::uint32_t kNoStep = static_cast<std::uint32_t>(-1);
inline constexpr std::uint32_t kNoHole = static_cast<std::uint32_t>(-1);

// Outcome taxonomy of one peeling step. The eight kinds partition every
// possible identification of two boundary edges:
//   - merge-components / genus-merge: the edges lie on different holes with
//     perimeters >= 1, not both 1; the holes merge (components merge, or the
//     genus grows by one if they already share a component).
//   - loop-loop-merge: two perimeter-1 holes glued, one true vertex.
//     Called loop-closure when the red marker sits on one of them.
//   - split-hole: same hole, both resulting arcs non-empty.
//   - strong-closure / weak-closure: same hole, the partner is the very next
//     (resp. previous) boundary edge, so one arc is empty and its corner
//     becomes a true vertex.
//   - bigon-closure: the two edges of a perimeter-2 hole, two true vertices.
enum class PeelKind : std::uint8_t {
  kMergeComponents,
  kGenusMerge,
  kSplitHole,
  kStrongClosure,
  kWeakClosure,
  kLoopClosure,
  kBigonClosure,
  kLoopLoopMerge,
};

const char* to_string(PeelKind kind);

struct PeelEvent {
  std::uint32_t step = 0;
  Dart peeled = kNoDart;
  Dart partner = kNoDart;
  PeelKind kind = PeelKind::kMergeComponents;
  std::uint8_t vertices_created = 0;
  bool same_hole = false;
  bool red_swallowed = false;
  bool red_resampled = false;
  std::uint32_t peeled_perimeter = 0;   // pi(i), before gluing
  std::uint32_t partner_perimeter = 0;  // partner's hole, before gluing
  std::uint32_t split_first = 0;        // split-hole only: arc perimeters
  std::uint32_t split_second = 0;
  // State counters after the step.
  std::uint32_t holes = 0;
  std::uint32_t loop_holes = 0;
  std::uint32_t bigon_holes = 0;
  std::uint64_t true_vertices = 0;
};

// Fate of one tracked corner label under Algorithm R.
struct LabelFate {
  std::uint32_t sigma_step = kNoStep;      // step its vertex met the red vertex
  std::uint32_t swallowed_step = kNoStep;  // step its vertex closed without red
  PeelKind swallow_kind = PeelKind::kMergeComponents;
};

struct TrajectoryLog {
  std::uint32_t n = 0;
  std::uint32_t polygon_count = 0;
  std::vector<PeelEvent> events;  // populated only when recording is enabled
  std::vector<std::uint32_t> strong_closure_steps;  // theta^(1) < theta^(2) < ...
  std::vector<std::uint32_t> loop_closure_steps;
  std::uint32_t tau = kNoStep;  // first i with H_i = 1
  std::vector<LabelFate> labels;
  std::uint64_t true_vertices_at_stop = 0;
  std::uint32_t steps_run = 0;
  // Monitors, aggregated over the whole trajectory.
  std::uint32_t sup_loops = 0;
  std::uint32_t sup_bigons = 0;
  std::uint64_t peeled_loop_steps = 0;   // #{i : pi(i) = 1}
  std::uint64_t peeled_bigon_steps = 0;  // #{i : pi(i) = 2}
  std::int32_t max_delta_loops = 0;
  std::int32_t max_delta_loops_bigons = 0;
};

// The exploration state S_i: a disjoint union of labeled maps with holes,
// obtained from the starting polygons by i edge identifications.
//
// Representation. Boundary darts form circular doubly-linked lists, one per
// hole, ordered by the face traversal. Between consecutive darts d and
// next(d) sits a boundary corner, identified by the id head_corner(d);
// corner ids live in a union-find whose classes are the partially built
// vertices. Because a partially glued surface is a 2-manifold with boundary,
// every class owns at most one boundary corner; a class that loses its last
// corner is a true vertex of the final map. Identifying darts a and b glues
// them head to tail, which merges the corner after a with the corner before
// b and the corner before a with the corner after b; the hole lists are
// spliced accordingly. Hole membership is maintained by relabeling the
// smaller side of every split or merge.
class SurfaceState {
 public:
  explicit SurfaceState(const Configuration& config, bool track_hole_min = false);

  std::uint32_t n() const { return n_; }
  std::uint32_t step() const { return step_; }
  std::uint64_t boundary_size() const { return boundary_.size(); }
  bool done() const { return boundary_.empty(); }
  std::uint32_t hole_count() const { return hole_count_; }     // H_i
  std::uint32_t loop_hole_count() const { return loop_holes_; }   // L_i
  std::uint32_t bigon_hole_count() const { return bigon_holes_; }  // B_i
  std::uint64_t true_vertices() const { return true_vertices_; }   // X_i
  std::uint32_t tau() const { return tau_; }

  bool on_boundary(Dart d) const { return hole_of_[d] != kNoHole; }
  Dart next(Dart d) const { return next_[d]; }
  Dart prev(Dart d) const { return prev_[d]; }
  std::uint32_t hole_perimeter_of(Dart d) const;
  std::vector<std::uint32_t> hole_perimeters() const;  // all alive holes
  const std::vector<Dart>& boundary_darts() const { return boundary_; }
  Dart boundary_dart(std::uint64_t index) const { return boundary_[index]; }
  // Uniform over the boundary minus `excluded`; used by on-the-fly mode.
  Dart random_other_boundary_dart(Dart excluded, RngStream& rng) const;

  // Algorithm H helper: the minimal-label dart among the holes of minimal
  // perimeter. Requires track_hole_min.
  Dart min_dart_of_min_hole() const;

  // Red marker (Algorithm R). The red corner is the head corner of a
  // boundary dart; peeling that dart peels the edge immediately to the left
  // of the red marker.
  bool red_active() const { return red_active_; }
  void init_red(Dart position);      // red := head corner of `position`
  void resample_red(Dart position);  // same, after a closure swallowed it
  Dart red_position() const;
  bool red_on_loop() const;

  // Corner labels. `head` selects the head corner of d, otherwise the tail.
  void attach_label(std::uint32_t label_count);  // reserve fates 0..count-1
  void place_label(std::uint32_t label, Dart d, bool head);
  const std::vector<LabelFate>& label_fates() const { return label_fates_; }

  // One peeling step: identify boundary darts `peeled` and `partner`.
  // Throws if the darts coincide or are not on the boundary.
  PeelEvent peel(Dart peeled, Dart partner);

  // Final Euler data; requires done().
  MapSummary final_summary() const;

  // Walks every structural invariant (boundary identity, hole sizes, corner
  // positions, counters); throws on violation. Test support.
  void check_invariants() const;

 private:
  struct Hole {
    std::uint32_t size = 0;
    std::uint32_t component = 0;  // polygon id, resolved through comp find
    Dart any_dart = kNoDart;
    Dart min_dart = kNoDart;  // maintained only when track_hole_min_
    bool alive = false;
  };

  std::uint32_t corner_find(std::uint32_t c) const;
  std::uint32_t corner_union(std::uint32_t a, std::uint32_t b);
  void corner_kill(std::uint32_t root);
  void set_position(std::uint32_t root, Dart d);

  std::uint32_t comp_find(std::uint32_t p) const;
  std::uint32_t comp_union(std::uint32_t a, std::uint32_t b);

  void remove_dart(Dart d);
  void hole_detach(std::uint32_t h);
  void hole_attach(std::uint32_t h);
  void retire_hole(std::uint32_t h);
  std::uint32_t new_hole(std::uint32_t component, std::uint32_t size, Dart any,
                         Dart min_dart);
  Dart scan_min(Dart start, Dart skip1, Dart skip2) const;  // walk a cycle
  void post_step_bookkeeping(PeelEvent& ev, std::uint32_t deaths);

  std::uint32_t n_ = 0;
  std::uint32_t step_ = 0;
  bool track_hole_min_ = false;

  std::vector<Dart> next_, prev_;
  std::vector<std::uint32_t> hole_of_;
  std::vector<std::uint32_t> head_corner_;
  std::vector<Dart> boundary_;
  std::vector<std::uint32_t> boundary_pos_;

  std::vector<Hole> holes_;
  std::uint32_t hole_count_ = 0;
  std::uint32_t loop_holes_ = 0;
  std::uint32_t bigon_holes_ = 0;
  std::set<std::pair<std::uint32_t, Dart>> min_index_;  // (size, min_dart)

  mutable std::vector<std::uint32_t> corner_parent_;
  std::vector<std::uint8_t> corner_rank_;
  std::vector<Dart> position_of_;  // corner root -> boundary dart, kNoDart = closed

  mutable std::vector<std::uint32_t> comp_parent_;
  std::vector<std::uint8_t> comp_rank_;
  struct CompData {
    std::uint64_t faces = 0;
    std::uint64_t darts = 0;
    std::uint64_t genus = 0;
    std::uint64_t true_vertices = 0;
  };
  std::vector<CompData> comp_data_;

  std::uint64_t true_vertices_ = 0;
  std::uint32_t tau_ = kNoStep;

  bool red_active_ = false;
  std::uint32_t red_corner_ = 0;

  std::vector<std::uint32_t> label_corner_;
  std::vector<LabelFate> label_fates_;
  std::vector<std::uint32_t> live_labels_;
};

// A Markovian peeling rule: picks the next edge to peel from the visible
// state only, never from unrevealed pairing information.
class PeelStrategy {
 public:
  virtual ~PeelStrategy() = default;
  virtual Dart choose(SurfaceState& state) = 0;
  virtual bool needs_red() const { return false; }
  virtual bool needs_hole_min() const { return false; }
  virtual RngStream* aux_rng() { return nullptr; }
  virtual const char* name() const = 0;
};

// Algorithm H: peel in a hole of minimal perimeter, tie broken by the
// minimal side label.
std::unique_ptr<PeelStrategy> strategy_min_hole();
// Uniform peeling: a uniform boundary edge, independent of the pairing.
std::unique_ptr<PeelStrategy> strategy_uniform(RngStream rng);
// Algorithm R: peel the edge immediately left of the red marker, resampling
// the marker uniformly on the boundary whenever it is swallowed.
std::unique_ptr<PeelStrategy> strategy_red_vertex(RngStream rng);

enum class PeelMode { kPresampled, kOnTheFly };

struct PeelRunOptions {
  PeelMode mode = PeelMode::kPresampled;
  bool record_events = false;
  bool stop_at_single_hole = false;  // stop as soon as H_i == 1
  std::uint32_t track_k = 0;         // tag the 2k endpoints of k uniform sides
};

struct PeelRunResult {
  TrajectoryLog log;
  MapSummary summary;     // valid when completed
  bool completed = false;
};

// Explore the gluing of `config` with the given strategy. Presampled mode
// draws one uniform pairing up front (the run is then deterministic given
// it, and the final summary equals glue() on that pairing); on-the-fly mode
// draws each partner uniformly among the 2(n-i)-1 other boundary edges.
// `label_rng` is required when options.track_k > 0.
PeelRunResult run(const Configuration& config, PeelStrategy& strategy,
                  const PeelRunOptions& options, RngStream& pairing_rng,
                  RngStream* label_rng = nullptr);

// Tags the 2k endpoints of k uniformly chosen polygon sides with labels
// 0..2k-1 (even = tail corner, odd = head corner).
void track_labels(SurfaceState& state, std::uint32_t k, RngStream& rng);

struct ClosureReport {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> strong_steps;  // theta^(1), theta^(2), ...
  std::vector<std::uint32_t> loop_steps;
  std::vector<double> increment_ratios;  // (theta^(i)-theta^(i-1))/(n-theta^(i-1))
  std::vector<LabelFate> labels;
};

// Extraction of the closure-time data of a log produced under Algorithm R,
// with the convention theta^(0) = 0.
ClosureReport closure_report(const TrajectoryLog& log);

struct MonitorReport {
  std::uint32_t sup_loops = 0;
  std::uint32_t sup_bigons = 0;
  std::uint64_t peeled_loop_steps = 0;
  std::uint64_t peeled_bigon_steps = 0;
  std::uint32_t first_loop_closure = kNoStep;
  std::int32_t max_delta_loops = 0;
  std::int32_t max_delta_loops_bigons = 0;
};

MonitorReport monitors(const TrajectoryLog& log);

}  // namespace polyglue
