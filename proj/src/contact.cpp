#include "cpphase/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "cpphase/error.hpp"
#include "cpphase/rng.hpp"

namespace cpphase {

std::string to_string(Fate f) {
  switch (f) {
    case Fate::extinct: return "extinct";
    case Fate::alive_at_horizon: return "alive_at_horizon";
    case Fate::boundary_censored: return "boundary_censored";
    case Fate::target_hit: return "target_hit";
    case Fate::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::standard: return "standard";
    case Variant::half_line_dagger: return "half_line_dagger";
    case Variant::rightmost_eta: return "rightmost_eta";
  }
  return "unknown";
}

void validate(const SimParams& p, const WindowedGraph& graph) {
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) throw SpecError("lambda must be a finite number >= 0");
  if (!(p.horizon > 0.0)) throw SpecError("horizon must be positive");
  if (p.horizon > 1e9) throw SpecError("horizons beyond 1e9 are rejected (time resolution)");
  if (p.arrow_cap != 0.0 && p.arrow_cap < p.lambda) throw SpecError("arrow cap must be >= lambda");
  if (graph.size() == 0) throw SpecError("empty graph");
  for (Vertex v : p.initial)
    if (!graph.contains(v)) throw SpecError("initial vertex " + std::to_string(v) + " outside window");
  for (Vertex v : p.permanent)
    if (!graph.contains(v)) throw SpecError("permanent vertex " + std::to_string(v) + " outside window");
  for (Vertex v : p.targets)
    if (!graph.contains(v)) throw SpecError("target vertex " + std::to_string(v) + " outside window");
  const bool half_line = p.variant != Variant::standard;
  if (p.initial.empty() && p.permanent.empty() && !half_line) throw SpecError("initial set is empty");
  for (std::size_t i = 0; i < p.sample_times.size(); ++i) {
    const double s = p.sample_times[i];
    if (!(s >= 0.0) || s > p.horizon) throw SpecError("sample times must lie in [0, horizon]");
    if (i > 0 && !(s > p.sample_times[i - 1])) throw SpecError("sample times must be increasing");
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::uint64_t zigzag(Vertex v) noexcept {
  return v >= 0 ? static_cast<std::uint64_t>(v) * 2 : static_cast<std::uint64_t>(-(v + 1)) * 2 + 1;
}

// One Poisson process of marks, realised epoch by epoch. Epoch e covers
// [e, e+1) and its marks come from substream e of the key, so the marks do
// not depend on when or how often the process is queried.
class MarkCursor {
 public:
  MarkCursor() = default;
  MarkCursor(std::uint64_t key, double rate) : key_(key), rate_(rate) {}

  // Pending mark is the first one strictly after t.
  void advance(double t) {
    if (rate_ <= 0.0) {
      next_ = kInf;
      return;
    }
    if (next_ > t && epoch_ >= 0) return;
    const auto e = static_cast<std::int64_t>(std::floor(t));
    if (epoch_ < e) start_epoch(e);
    while (true) {
      cur_ += rng_.exponential(rate_);
      if (cur_ >= static_cast<double>(epoch_ + 1)) {
        start_epoch(epoch_ + 1);
        continue;
      }
      aim_ = rng_.uniform();
      thin_ = rng_.uniform();
      if (cur_ > t) {
        next_ = cur_;
        return;
      }
    }
  }

  double next() const noexcept { return next_; }
  double aim() const noexcept { return aim_; }
  double thin() const noexcept { return thin_; }

 private:
  void start_epoch(std::int64_t e) {
    epoch_ = e;
    rng_ = StreamRng(key_, static_cast<std::uint64_t>(e));
    cur_ = static_cast<double>(e);
    next_ = -kInf;
  }

  std::uint64_t key_ = 0;
  double rate_ = 0.0;
  std::int64_t epoch_ = -1;
  StreamRng rng_;
  double cur_ = 0.0;
  double next_ = -kInf;
  double aim_ = 0.0;
  double thin_ = 0.0;
};

enum class Kind : std::uint8_t { recovery, arrow, edge };

struct Event {
  double t;
  std::uint64_t seq;
  std::uint32_t v;
  std::uint32_t stamp;
  std::size_t slot;
  Kind kind;
  bool operator>(const Event& o) const noexcept { return t != o.t ? t > o.t : seq > o.seq; }
};

class Engine {
 public:
  Engine(const WindowedGraph& g, const SimParams& p, std::uint64_t seed)
      : g_(g), p_(p), adj_(g.adjacency()), n_(g.size()), seed_(seed) {
    cap_ = p.arrow_cap > 0.0 ? p.arrow_cap : p.lambda;
    accept_ = cap_ > 0.0 ? p.lambda / cap_ : 0.0;
    eta_ = p.variant == Variant::rightmost_eta;
    half_line_ = p.variant != Variant::standard;
    state_.assign(n_, 0);
    permanent_.assign(n_, 0);
    target_.assign(n_, 0);
    stamp_.assign(n_, 0);
    recovery_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      recovery_[i] = MarkCursor(derive_stream(seed, "cp-recovery", zigzag(g.global(i))), 1.0);
    if (p.arrows == ArrowMode::per_vertex) {
      arrow_.resize(n_);
      for (std::size_t i = 0; i < n_; ++i)
        arrow_[i] = MarkCursor(derive_stream(seed, "cp-arrow", zigzag(g.global(i))),
                               cap_ * static_cast<double>(adj_.degree(i)));
    } else {
      edge_.resize(adj_.targets.size());
      for (std::size_t i = 0; i < n_; ++i) {
        const std::uint64_t base = derive_stream(seed, "cp-edge", zigzag(g.global(i)));
        for (std::size_t s = adj_.offsets[i]; s < adj_.offsets[i + 1]; ++s)
          edge_[s] = MarkCursor(derive_stream(base, zigzag(g.global(adj_.targets[s]))), cap_);
      }
    }
    for (Vertex v : p.permanent) permanent_[g.local(v)] = 1;
    if (half_line_) permanent_[0] = 1;
    for (auto f : permanent_) permanent_count_ += f;
    for (Vertex v : p.targets) target_[g.local(v)] = 1;
  }

  SimOutcome run() {
    out_.seed = seed_;
    // Initial state; targets and margins only react to later infections.
    std::vector<std::size_t> init;
    for (std::size_t i = 0; i < n_; ++i)
      if (permanent_[i]) init.push_back(i);
    for (Vertex v : p_.initial) init.push_back(g_.local(v));
    checks_ = false;
    for (auto i : init)
      if (!state_[i]) infect(i);
    checks_ = true;
    if (eta_ && rightmost_ >= 0) {
      refill_upto_ = static_cast<std::size_t>(rightmost_);
      for (std::size_t j = 0; j < refill_upto_; ++j)
        if (!state_[j]) holes_.push_back(j);
    }
    if (p_.record_jumps || eta_) out_.jumps.push_back({0.0, x_global()});
    if (count_ == permanent_count_) t_ext_ = 0.0;

    bool stopped = false;
    if (p_.stop_on_extinction && count_ == permanent_count_) {
      finish(Fate::extinct, 0.0);
      stopped = true;
    }
    while (!stopped) {
      if (queue_.empty()) {
        if (count_ == 0 || (count_ == permanent_count_ && p_.stop_on_extinction)) finish(Fate::extinct, t_ext_);
        else finish(Fate::alive_at_horizon, p_.horizon);
        break;
      }
      const Event ev = queue_.top();
      if (ev.t > p_.horizon) {
        finish(Fate::alive_at_horizon, p_.horizon);
        break;
      }
      queue_.pop();
      if (ev.stamp != stamp_[ev.v] || !state_[ev.v]) continue;
      flush_samples(ev.t, false);
      now_ = ev.t;
      process(ev);
      ++out_.events;
      if (stop_) {
        finish(*stop_, now_);
        break;
      }
      if (count_ == permanent_count_) {
        t_ext_ = now_;
        if (p_.stop_on_extinction || count_ == 0) {
          finish(Fate::extinct, now_);
          break;
        }
      }
      if (p_.event_budget != 0 && out_.events >= p_.event_budget) {
        finish(Fate::budget_exhausted, now_);
        break;
      }
    }
    return std::move(out_);
  }

 private:
  Vertex x_global() const { return rightmost_ < 0 ? g_.lo() - 1 : g_.global(static_cast<std::size_t>(rightmost_)); }

  void push(double t, std::size_t v, std::size_t slot, Kind kind) {
    if (!std::isfinite(t)) return;
    queue_.push(Event{t, seq_++, static_cast<std::uint32_t>(v), stamp_[v], slot, kind});
  }

  void schedule_arrows(std::size_t i) {
    if (accept_ <= 0.0) return;
    if (p_.arrows == ArrowMode::per_vertex) {
      if (adj_.degree(i) == 0) return;
      arrow_[i].advance(now_);
      push(arrow_[i].next(), i, 0, Kind::arrow);
    } else {
      for (std::size_t s = adj_.offsets[i]; s < adj_.offsets[i + 1]; ++s) {
        edge_[s].advance(now_);
        push(edge_[s].next(), i, s, Kind::edge);
      }
    }
  }

  void infect(std::size_t i) {
    state_[i] = 1;
    ++count_;
    ++stamp_[i];
    if (!permanent_[i]) {
      recovery_[i].advance(now_);
      push(recovery_[i].next(), i, 0, Kind::recovery);
    }
    schedule_arrows(i);
    const auto li = static_cast<std::ptrdiff_t>(i);
    const bool new_max = li > rightmost_;
    if (new_max) rightmost_ = li;
    if (checks_ && !stop_) {
      if (target_[i]) {
        stop_ = Fate::target_hit;
        out_.hit = g_.global(i);
      } else if (p_.margin > 0 && (i + p_.margin >= n_ || (!half_line_ && i < p_.margin))) {
        stop_ = Fate::boundary_censored;
        out_.hit = g_.global(i);
      }
    }
    if (new_max && checks_) on_rightmost_change();
  }

  void recover(std::size_t i) {
    state_[i] = 0;
    --count_;
    ++stamp_[i];
    const auto li = static_cast<std::ptrdiff_t>(i);
    if (li == rightmost_) {
      while (rightmost_ >= 0 && !state_[static_cast<std::size_t>(rightmost_)]) --rightmost_;
      on_rightmost_change();
    } else if (eta_) {
      holes_.push_back(i);
    }
  }

  void on_rightmost_change() {
    if (eta_) {
      // Reset to {lo, ..., X}.
      const auto x = static_cast<std::size_t>(rightmost_);
      const std::size_t from = refill_upto_;
      for (std::size_t h : holes_)
        if (h < x && !state_[h]) infect(h);
      holes_.clear();
      for (std::size_t j = from; j < x; ++j)
        if (!state_[j]) infect(j);
      refill_upto_ = x;
    }
    if (p_.record_jumps || eta_) out_.jumps.push_back({now_, x_global()});
  }

  void process(const Event& ev) {
    const std::size_t i = ev.v;
    switch (ev.kind) {
      case Kind::recovery:
        recover(i);
        break;
      case Kind::arrow: {
        MarkCursor& c = arrow_[i];
        const auto nb = adj_.neighbours(i);
        const auto k = std::min<std::size_t>(static_cast<std::size_t>(c.aim() * static_cast<double>(nb.size())),
                                             nb.size() - 1);
        const std::size_t j = nb[k];
        const bool used = c.thin() < accept_;
        c.advance(now_);
        push(c.next(), i, 0, Kind::arrow);
        if (used && !state_[j]) infect(j);
        break;
      }
      case Kind::edge: {
        MarkCursor& c = edge_[ev.slot];
        const std::size_t j = adj_.targets[ev.slot];
        const bool used = c.thin() < accept_;
        c.advance(now_);
        push(c.next(), i, ev.slot, Kind::edge);
        if (used && !state_[j]) infect(j);
        break;
      }
    }
  }

  Snapshot snapshot(double t) const {
    Snapshot s;
    s.t = t;
    s.count = count_;
    s.rightmost = x_global();
    if (p_.record_sets) {
      for (std::size_t i = 0; i < n_; ++i)
        if (state_[i]) s.set.push_back(g_.global(i));
    }
    return s;
  }

  // Emits every sample time before t (or up to and including t if inclusive).
  void flush_samples(double t, bool inclusive) {
    while (next_sample_ < p_.sample_times.size()) {
      const double s = p_.sample_times[next_sample_];
      if (inclusive ? s > t : s >= t) break;
      out_.samples.push_back(snapshot(s));
      ++next_sample_;
    }
  }

  void finish(Fate fate, double t) {
    out_.fate = fate;
    out_.time = t;
    const bool absorbing = fate == Fate::extinct && count_ == 0;
    if (fate == Fate::alive_at_horizon || absorbing) flush_samples(p_.horizon, true);
    else flush_samples(t, false);
    out_.final_count = count_;
    if (p_.record_sets) out_.final_set = snapshot(t).set;
  }

  const WindowedGraph& g_;
  const SimParams& p_;
  Adjacency adj_;
  std::size_t n_;
  std::uint64_t seed_;
  double cap_ = 0.0;
  double accept_ = 0.0;
  bool eta_ = false;
  bool half_line_ = false;
  bool checks_ = true;

  std::vector<std::uint8_t> state_, permanent_, target_;
  std::vector<std::uint32_t> stamp_;
  std::vector<MarkCursor> recovery_, arrow_, edge_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  double t_ext_ = 0.0;
  std::size_t count_ = 0;
  std::size_t permanent_count_ = 0;
  std::ptrdiff_t rightmost_ = -1;
  std::vector<std::size_t> holes_;
  std::size_t refill_upto_ = 0;
  std::size_t next_sample_ = 0;
  std::optional<Fate> stop_;
  SimOutcome out_;
};

}  // namespace

SimOutcome simulate(const WindowedGraph& graph, const SimParams& params, std::uint64_t seed) {
  validate(params, graph);
  Engine engine(graph, params, seed);
  return engine.run();
}

SimOutcome simulate_eta(const WindowedGraph& graph, double lambda, double horizon, std::uint64_t seed,
                        Vertex x0, std::vector<double> sample_times, std::size_t margin) {
  SimParams p;
  p.lambda = lambda;
  p.horizon = horizon;
  p.variant = Variant::rightmost_eta;
  if (x0 < 0 || !graph.contains(graph.lo() + x0)) throw SpecError("x0 outside the half-line window");
  for (Vertex v = graph.lo(); v <= graph.lo() + x0; ++v) p.initial.push_back(v);
  p.sample_times = std::move(sample_times);
  p.record_jumps = true;
  p.stop_on_extinction = false;
  p.margin = margin;
  return simulate(graph, p, seed);
}

BlockWalk extract_block_process(const SimOutcome& eta, const CutDecomposition& dec) {
  BlockWalk w;
  for (const auto& j : eta.jumps) {
    const auto b = dec.block_of(j.x);
    if (b < 0) {
      w.truncated = true;
      break;
    }
    if (!w.z.empty() && w.z.back() == b) continue;
    if (!w.z.empty()) {
      const auto step = b - w.z.back();
      if (step > 0) ++w.up_steps;
      else ++w.down_steps;
      if (step > 1 || step < -1) ++w.long_steps;
    }
    w.z.push_back(b);
    w.times.push_back(j.t);
  }
  return w;
}

DominationReport domination_check(const WindowedGraph& graph, double lambda, double horizon,
                                  std::uint64_t seed, std::size_t replicas, std::size_t n_samples) {
  DominationReport r;
  r.replicas = replicas;
  SimParams base;
  base.lambda = lambda;
  base.horizon = horizon;
  base.record_sets = true;
  base.stop_on_extinction = false;
  for (std::size_t k = 1; k <= n_samples; ++k)
    base.sample_times.push_back(horizon * static_cast<double>(k) / static_cast<double>(n_samples));
  const Vertex x0 = std::min<Vertex>(4, static_cast<Vertex>(graph.size()) - 1);
  for (Vertex v = graph.lo(); v <= graph.lo() + x0; ++v) base.initial.push_back(v);

  for (std::size_t rep = 0; rep < replicas && r.held; ++rep) {
    const std::uint64_t s = derive_stream(seed, "domination", rep);
    SimParams dagger = base;
    dagger.variant = Variant::half_line_dagger;
    SimParams eta = base;
    eta.variant = Variant::rightmost_eta;
    const auto a = simulate(graph, dagger, s);
    const auto b = simulate(graph, eta, s);
    const std::size_t m = std::min(a.samples.size(), b.samples.size());
    for (std::size_t k = 0; k < m; ++k) {
      ++r.comparisons;
      const auto& small = a.samples[k].set;
      const auto& big = b.samples[k].set;
      const auto miss = std::find_if(small.begin(), small.end(),
                                     [&](Vertex v) { return !std::binary_search(big.begin(), big.end(), v); });
      if (miss != small.end()) {
        r.held = false;
        r.failing_replica = rep;
        r.failing_time = a.samples[k].t;
        r.witness = *miss;
        break;
      }
    }
  }
  return r;
}

}  // namespace cpphase
