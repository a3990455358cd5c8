#include "dyckshift/shift.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace dyckshift {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("DYCKSHIFT_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 4'000'000'000ULL;  // sized for periods <= 13 on graphs with ~20 edges
}

namespace {

// Budget meter shared across workers; batched to keep the atomic cold.
struct Meter {
  std::atomic<std::uint64_t>* total;
  std::uint64_t limit;
  std::uint64_t local = 0;

  void tick() {
    if (++local < 8192) return;
    flush();
  }
  void flush() {
    if (local == 0) return;
    std::uint64_t t = total->fetch_add(local, std::memory_order_relaxed) + local;
    local = 0;
    if (t > limit) throw BudgetExceeded();
  }
};

// Symbols as dense ints: 2*edge + (plus ? 1 : 0); edge indices follow the
// id-sorted order of DirectedGraph, so int order equals the canonical
// Minus(e) < Plus(e), edges-by-id order.
struct Dense {
  int nv = 0, ne = 0;
  std::vector<int> esrc, edst;
  std::vector<std::vector<int>> out, in;

  explicit Dense(const DirectedGraph& g)
      : nv(static_cast<int>(g.vertex_count())), ne(static_cast<int>(g.edge_count())) {
    esrc.resize(ne);
    edst.resize(ne);
    out.resize(nv);
    in.resize(nv);
    for (int e = 0; e < ne; ++e) {
      esrc[e] = g.src_of(e);
      edst[e] = g.dst_of(e);
      out[esrc[e]].push_back(e);
      in[edst[e]].push_back(e);
    }
  }
};

constexpr int kMinus = 0, kPlus = 1, kIdent = 2;

struct HatSym {
  int kind;   // kMinus/kPlus over the contracted graph, or kIdent
  int index;  // edge index or root vertex index in the contracted graph
};

// One-sided stack machine for the normal form of a running product.
// `up` is stored in reverse path order (front() = topmost edge).
struct Machine {
  const Dense* d;
  int apex = -1;
  std::vector<int> up, down;
  bool dead = false;

  void reset() {
    apex = -1;
    up.clear();
    down.clear();
    dead = false;
  }

  int right_vertex() const { return down.empty() ? apex : d->edst[down.back()]; }

  bool step_minus(int e) {
    if (apex < 0) {
      apex = d->esrc[e];
      down.push_back(e);
      return true;
    }
    if (d->esrc[e] != right_vertex()) return false;
    down.push_back(e);
    return true;
  }

  bool step_plus(int e) {
    if (apex < 0) {
      apex = d->esrc[e];
      up.push_back(e);
      return true;
    }
    if (!down.empty()) {
      if (down.back() != e) return false;
      down.pop_back();
      return true;
    }
    if (d->edst[e] != apex) return false;
    up.push_back(e);
    apex = d->esrc[e];
    return true;
  }

  bool step_ident(int v) {
    if (apex < 0) {
      apex = v;
      return true;
    }
    return right_vertex() == v;
  }

  bool step_sym(int sym) { return sym & 1 ? step_plus(sym >> 1) : step_minus(sym >> 1); }

  bool step_hat(const HatSym& h) {
    switch (h.kind) {
      case kMinus: return step_minus(h.index);
      case kPlus: return step_plus(h.index);
      default: return step_ident(h.index);
    }
  }

  bool pure_descending_closed() const {
    return up.empty() && !down.empty() && d->edst[down.back()] == apex;
  }
  bool pure_ascending_closed() const {
    return down.empty() && !up.empty() && d->edst[up.front()] == apex;
  }
  bool idempotent() const { return up.empty() && down.empty() && apex >= 0; }
};

bool run_rotation(Machine& m, const std::vector<int>& w, int rot) {
  m.reset();
  const int n = static_cast<int>(w.size());
  for (int i = 0; i < n; ++i)
    if (!m.step_sym(w[(rot + i) % n])) return false;
  return true;
}

// Rotation criterion over the original word.
bool valid_periodic(Machine& m, const std::vector<int>& w) {
  const int n = static_cast<int>(w.size());
  for (int r = 0; r < n; ++r) {
    if (!run_rotation(m, w, r)) continue;
    if (m.idempotent() || m.pure_descending_closed() || m.pure_ascending_closed())
      return true;
  }
  return false;
}

bool is_least_rotation(const std::vector<int>& w) {
  const int n = static_cast<int>(w.size());
  for (int r = 1; r < n; ++r) {
    for (int i = 0; i < n; ++i) {
      int a = w[i], b = w[(r + i) % n];
      if (a != b) {
        if (b < a) return false;
        break;
      }
    }
  }
  return true;
}

bool is_primitive(const std::vector<int>& w) {
  const int n = static_cast<int>(w.size());
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    bool rep = true;
    for (int i = d; i < n && rep; ++i)
      if (w[i] != w[i % d]) rep = false;
    if (rep) return false;
  }
  return true;
}

// Least d dividing n with walk = prefix^(n/d); the walk is closed so d always
// exists (worst case d = n).
std::pair<std::vector<int>, int> primitive_cycle(const std::vector<int>& walk) {
  const int n = static_cast<int>(walk.size());
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    bool rep = true;
    for (int i = d; i < n && rep; ++i)
      if (walk[i] != walk[i % d]) rep = false;
    if (rep) {
      std::vector<int> c(walk.begin(), walk.begin() + d);
      // canonicalize to the least rotation
      std::vector<int> best = c;
      for (int r = 1; r < d; ++r) {
        std::vector<int> rot(d);
        for (int i = 0; i < d; ++i) rot[i] = c[(r + i) % d];
        if (rot < best) best = rot;
      }
      return {best, n / d};
    }
  }
  return {walk, 1};
}

struct HatData {
  Dense hat_dense;
  std::vector<HatSym> hat_of;  // indexed by G-symbol

  HatData(const DirectedGraph& g, const TreePartition& p, const ContractedGraph& c)
      : hat_dense(c.graph) {
    hat_of.resize(2 * g.edge_count());
    for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
      const std::string& id = g.edge(e).id;
      for (int s = 0; s < 2; ++s) {
        if (p.f_edges.count(id)) {
          int root = c.graph.vertex_index(c.hat_ident.at(id));
          hat_of[2 * e + s] = HatSym{kIdent, root};
        } else {
          hat_of[2 * e + s] = HatSym{s ? kPlus : kMinus, c.graph.edge_index(id)};
        }
      }
    }
  }
};

// Classifies a word already known to generate a periodic point.
OrbitClass classify_dense(const HatData& hd, Machine& hm, const std::vector<int>& w,
                          const ContractedGraph& c) {
  const int n = static_cast<int>(w.size());
  for (int r = 0; r < n; ++r) {
    hm.reset();
    bool alive = true;
    for (int i = 0; i < n && alive; ++i)
      alive = hm.step_hat(hd.hat_of[w[(r + i) % n]]);
    if (!alive) continue;
    if (hm.idempotent()) {
      OrbitClass oc;
      oc.kind = OrbitClass::Kind::Neutral;
      oc.root = c.graph.vertex_name(hm.apex);
      return oc;
    }
    if (hm.pure_descending_closed() || hm.pure_ascending_closed()) {
      bool neg = hm.pure_descending_closed();
      std::vector<int> walk = neg ? hm.down : std::vector<int>(hm.up.rbegin(), hm.up.rend());
      auto [cyc, m] = primitive_cycle(walk);
      OrbitClass oc;
      oc.kind = neg ? OrbitClass::Kind::Negative : OrbitClass::Kind::Positive;
      oc.exponent = m;
      for (int e : cyc) oc.cycle.push_back(c.graph.edge(e).id);
      return oc;
    }
  }
  throw NotAPeriodicPoint("no rotation of the projected word certifies a class");
}

std::vector<int> to_dense_word(const DirectedGraph& g, std::span<const Symbol> w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (const Symbol& s : w) {
    if (s.kind == SymKind::Ident)
      throw ValidationError("shift words use only edge symbols, got " + symbol_to_string(s));
    if (!g.has_edge(s.name)) throw UnknownSymbol(symbol_to_string(s));
    out.push_back(2 * g.edge_index(s.name) + (s.kind == SymKind::Plus ? 1 : 0));
  }
  return out;
}

ShiftWord from_dense_word(const DirectedGraph& g, const std::vector<int>& w) {
  ShiftWord out;
  out.reserve(w.size());
  for (int sym : w)
    out.push_back(Symbol{sym & 1 ? SymKind::Plus : SymKind::Minus, g.edge(sym >> 1).id});
  return out;
}

// DFS over admissible words of fixed length with undoable machine state.
struct Enumerator {
  const Dense& d;
  const HatData& hd;
  const ContractedGraph& c;
  int k;
  Meter meter;
  Machine m, scratch, hatm;
  std::vector<int> word;
  std::vector<std::pair<std::vector<int>, OrbitClass>> found;

  Enumerator(const Dense& dense, const HatData& hat, const ContractedGraph& cg, int period,
             std::atomic<std::uint64_t>* total, std::uint64_t limit)
      : d(dense), hd(hat), c(cg), k(period), meter{total, limit} {
    m.d = &d;
    scratch.d = &d;
    hatm.d = &hd.hat_dense;
  }

  void leaf() {
    if (!is_least_rotation(word)) return;
    if (!is_primitive(word)) return;
    if (!valid_periodic(scratch, word)) return;
    found.emplace_back(word, classify_dense(hd, hatm, word, c));
  }

  // Symbols that can extend the current state without hitting zero.
  template <typename F>
  void for_extensions(F&& f) {
    const int right = m.right_vertex();
    if (!m.down.empty()) {
      for (int e : d.out[right]) f(2 * e);
      f(2 * m.down.back() + 1);
      return;
    }
    for (int e : d.out[right]) f(2 * e);
    for (int e : d.in[m.apex]) f(2 * e + 1);
  }

  void dfs(int depth) {
    if (depth == k) {
      leaf();
      return;
    }
    const int lo = word[0];
    for_extensions([&](int sym) {
      if (sym < lo) return;  // least rotations start with their minimum symbol
      meter.tick();
      const int prev_apex = m.apex;
      const std::size_t down_size = m.down.size();
      if (!m.step_sym(sym)) return;
      word.push_back(sym);
      dfs(depth + 1);
      word.pop_back();
      if (m.down.size() > down_size) {
        m.down.pop_back();
      } else if (m.down.size() < down_size) {
        m.down.push_back(sym >> 1);
      } else {  // up push (loops leave the apex in place, so compare sizes)
        m.up.pop_back();
        m.apex = prev_apex;
      }
    });
  }

  void run(int start_sym) {
    m.reset();
    word.clear();
    meter.tick();
    if (!m.step_sym(start_sym)) return;
    word.push_back(start_sym);
    dfs(1);
  }
};

}  // namespace

bool is_admissible(const DirectedGraph& g, std::span<const Symbol> w) {
  if (w.empty()) return true;
  for (const Symbol& s : w)
    if (s.kind == SymKind::Ident)
      throw ValidationError("shift words use only edge symbols, got " + symbol_to_string(s));
  return !reduce(g, w).is_zero();
}

std::vector<std::uint64_t> count_admissible(const DirectedGraph& g, int max_len,
                                            const SearchOptions& opts) {
  Dense d(g);
  std::vector<std::uint64_t> counts(max_len + 1, 0);
  counts[0] = 1;
  std::atomic<std::uint64_t> total{0};
  std::uint64_t limit = opts.budget ? opts.budget : default_budget();
  Meter meter{&total, limit};
  Machine m;
  m.d = &d;

  // plain depth-first count with the same undo discipline as the enumerator
  std::vector<int> word;
  auto dfs = [&](auto&& self, int depth) -> void {
    if (depth > 0) counts[depth]++;
    if (depth == max_len) return;
    const int right = m.right_vertex();
    auto try_sym = [&](int sym) {
      meter.tick();
      const int prev_apex = m.apex;
      const std::size_t down_size = m.down.size();
      if (!m.step_sym(sym)) return;
      self(self, depth + 1);
      if (m.down.size() > down_size) {
        m.down.pop_back();
      } else if (m.down.size() < down_size) {
        m.down.push_back(sym >> 1);
      } else {
        m.up.pop_back();
        m.apex = prev_apex;
      }
    };
    if (!m.down.empty()) {
      for (int e : d.out[right]) try_sym(2 * e);
      try_sym(2 * m.down.back() + 1);
    } else {
      for (int e : d.out[right]) try_sym(2 * e);
      for (int e : d.in[m.apex]) try_sym(2 * e + 1);
    }
  };
  for (int sym = 0; sym < 2 * d.ne && max_len > 0; ++sym) {
    m.reset();
    if (!m.step_sym(sym)) continue;
    dfs(dfs, 1);
  }
  meter.flush();
  return counts;
}

bool is_periodic_word(const DirectedGraph& g, const ShiftWord& w) {
  if (w.empty()) throw ValidationError("periodic words must be nonempty");
  Dense d(g);
  auto word = to_dense_word(g, w);
  Machine m;
  m.d = &d;
  return valid_periodic(m, word);
}

OrbitClass classify_period_word(const DirectedGraph& g, const TreePartition& p,
                                const ContractedGraph& c, const ShiftWord& w) {
  if (!is_periodic_word(g, w))
    throw NotAPeriodicPoint(word_to_string(w));
  Dense d(g);
  HatData hd(g, p, c);
  Machine hm;
  hm.d = &hd.hat_dense;
  return classify_dense(hd, hm, to_dense_word(g, w), c);
}

std::vector<std::pair<PeriodicOrbit, OrbitClass>> enumerate_orbits(
    const DirectedGraph& g, int k, const SearchOptions& opts) {
  if (k <= 0) throw ValidationError("period must be positive");
  TreePartition p = compute_tree_partition(g);
  ContractedGraph c = contract(g, p);
  Dense d(g);
  HatData hd(g, p, c);
  std::uint64_t limit = opts.budget ? opts.budget : default_budget();
  std::atomic<std::uint64_t> total{0};

  int nthreads = std::max(1, opts.threads);
  int nsym = 2 * d.ne;
  std::vector<std::vector<std::pair<std::vector<int>, OrbitClass>>> results(nthreads);
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&](int t) {
    try {
      Enumerator en(d, hd, c, k, &total, limit);
      for (int sym = t; sym < nsym; sym += nthreads) en.run(sym);
      en.meter.flush();
      results[t] = std::move(en.found);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };

  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::pair<std::vector<int>, OrbitClass>> merged;
  for (auto& r : results)
    for (auto& item : r) merged.push_back(std::move(item));
  std::sort(merged.begin(), merged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::pair<PeriodicOrbit, OrbitClass>> out;
  out.reserve(merged.size());
  for (auto& [w, cls] : merged)
    out.push_back({PeriodicOrbit{from_dense_word(g, w), k}, std::move(cls)});
  return out;
}

CodeCounts code_counts(const DirectedGraph& g, const std::string& vertex, int bound,
                       const SearchOptions& opts) {
  if (bound < 0) throw ValidationError("bound must be nonnegative");
  int v0 = g.vertex_index(vertex);
  Dense d(g);
  CodeCounts out;
  out.c_counts.assign(bound + 1, 0);
  out.d_counts.assign(bound + 1, 0);

  // d_counts: path counts by dynamic programming over lengths.
  std::vector<std::uint64_t> cur(d.nv, 0);
  cur[v0] = 1;
  out.d_counts[0] = 1;
  for (int len = 1; len <= bound; ++len) {
    std::vector<std::uint64_t> next(d.nv, 0);
    for (int v = 0; v < d.nv; ++v) {
      if (!cur[v]) continue;
      for (int e : d.out[v]) next[d.edst[e]] += cur[v];
    }
    cur = std::move(next);
    std::uint64_t sum = 0;
    for (auto x : cur) sum += x;
    out.d_counts[len] = sum;
  }

  // c_counts: first returns; pops retrace the pushed edge, so only the vertex
  // stack matters and pushes branch over out-edges.
  std::uint64_t limit = opts.budget ? opts.budget : default_budget();
  std::atomic<std::uint64_t> total{0};
  Meter meter{&total, limit};
  std::vector<int> stack;
  auto dfs = [&](auto&& self, int len) -> void {
    if (stack.empty()) {
      if (len > 0) out.c_counts[len / 2]++;
      return;  // first return: stop
    }
    if (len == 2 * bound) return;
    int v = stack.back();
    for (int e : d.out[v]) {
      meter.tick();
      stack.push_back(d.edst[e]);
      self(self, len + 1);
      stack.pop_back();
    }
    // ascend, cancelling the edge that got us here
    stack.pop_back();
    self(self, len + 1);
    stack.push_back(v);
  };
  if (bound > 0) {
    for (int e : d.out[v0]) {
      meter.tick();
      stack.push_back(d.edst[e]);
      dfs(dfs, 1);
      stack.pop_back();
    }
  }
  meter.flush();
  return out;
}

}  // namespace dyckshift
