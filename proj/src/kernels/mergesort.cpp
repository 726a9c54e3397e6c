// Copyright 2026 The daesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <string>

#include "blocks.hpp"

namespace daesim::detail {

namespace {

struct Merge {
  std::uint64_t l, mid, end;
};

unsigned pass_count(std::uint64_t n) {
  unsigned p = 0;
  for (std::uint64_t w = 1; w < n; w *= 2) ++p;
  return p;
}

std::vector<Merge> merges_of(std::uint64_t n, unsigned pass) {
  const std::uint64_t w = std::uint64_t{1} << pass;
  std::vector<Merge> out;
  for (std::uint64_t l = 0; l < n; l += 2 * w) out.push_back({l, std::min(l + w, n), std::min(l + 2 * w, n)});
  return out;
}

struct UnitPass {
  std::vector<Merge> merges;
  std::vector<ChannelId> done_tokens;  // emitted once this pass's stores are acknowledged
};

struct ExecRegs {
  std::size_t pass = 0;
  std::size_t merge = 0;
  std::uint64_t i = 0, j = 0, k = 0;
  Word ti = 0, tj = 0;
  bool upd_i = true, upd_j = true;
  bool draining = false;
  bool done = false;
};

// Consumes each element of both runs exactly once: a side is re-read only
// after its previous value was emitted.
class MergeExec final : public LoopProcess<ExecRegs> {
 public:
  struct Io {
    ChannelId i_ch, j_ch;
    StoreSiteId dst_site;
    Addr dst;
    std::optional<ChannelId> go_i, go_j;
  };
  MergeExec(std::string name, Io io, std::vector<UnitPass> passes)
      : LoopProcess<ExecRegs>(std::move(name), ExecRegs{}), io_(io), passes_(std::move(passes)) {
    if (passes_.empty()) regs_.done = true;
    else start(regs_, 0);
  }

 protected:
  void iterate(Tick& t, ExecRegs& r) override {
    if (r.draining) {
      if (!t.stores_drained(io_.dst_site)) return;
      for (ChannelId tok : passes_[r.pass].done_tokens) t.stream_enq(tok, 0);
      r.draining = false;
      if (++r.pass == passes_.size()) r.done = true;
      else start(r, 0);
      return;
    }
    const auto& merges = passes_[r.pass].merges;
    const Merge& m = merges[r.merge];
    if (r.upd_i && r.i < m.mid) {
      auto v = t.decouple_response(io_.i_ch);
      if (!v) return;
      r.ti = v->front();
    }
    if (r.upd_j && r.j < m.end) {
      auto v = t.decouple_response(io_.j_ch);
      if (!v) return;
      r.tj = v->front();
    }
    const bool take_i = r.i < m.mid && (r.j >= m.end || r.ti <= r.tj);
    t.store(io_.dst_site, io_.dst + kWordBytes * r.k, take_i ? r.ti : r.tj);
    if (take_i) ++r.i;
    else ++r.j;
    r.upd_i = take_i;
    r.upd_j = !take_i;
    if (++r.k < m.end) return;
    if (r.merge + 1 == merges.size()) {
      r.draining = true;
      return;
    }
    if (io_.go_i) {
      t.stream_enq(*io_.go_i, 0);
      t.stream_enq(*io_.go_j, 0);
    }
    start(r, r.merge + 1);
  }

 private:
  void start(ExecRegs& r, std::size_t merge) const {
    const Merge& m = passes_[r.pass].merges[merge];
    r.merge = merge;
    r.i = r.k = m.l;
    r.j = m.mid;
    r.upd_i = r.upd_j = true;
  }

  Io io_;
  std::vector<UnitPass> passes_;
};

struct CopyRegs {
  std::size_t round = 0;
  std::uint64_t i = 0;
  bool draining = false;
  bool done = false;
};

class CopyExec final : public LoopProcess<CopyRegs> {
 public:
  CopyExec(ChannelId in, StoreSiteId site, Addr dst, std::uint64_t n, std::size_t rounds, ChannelId tok_i,
           ChannelId tok_j)
      : LoopProcess<CopyRegs>("copy.exec", CopyRegs{0, 0, false, rounds == 0}), in_(in), site_(site), dst_(dst),
        n_(n), rounds_(rounds), tok_i_(tok_i), tok_j_(tok_j) {}

 protected:
  void iterate(Tick& t, CopyRegs& r) override {
    if (r.draining) {
      if (!t.stores_drained(site_)) return;
      t.stream_enq(tok_i_, 0);
      t.stream_enq(tok_j_, 0);
      r.draining = false;
      r.i = 0;
      if (++r.round == rounds_) r.done = true;
      return;
    }
    auto v = t.decouple_response(in_);
    if (!v) return;
    t.store(site_, dst_ + kWordBytes * r.i, v->front());
    if (++r.i == n_) r.draining = true;
  }

 private:
  ChannelId in_;
  StoreSiteId site_;
  Addr dst_;
  std::uint64_t n_;
  std::size_t rounds_;
  ChannelId tok_i_, tok_j_;
};

struct UnitIds {
  ProcessId acc_i, acc_j, exec;
};

struct UnitSpec {
  std::string name;
  std::string src, dst;
  std::vector<unsigned> passes;
  std::optional<ChannelId> pass_tok_i, pass_tok_j;  // gate the first merge of every pass except pass 0
  std::vector<std::vector<ChannelId>> done_tokens;  // per entry of passes
};

UnitIds build_unit(KernelContext& cx, std::uint64_t n, const UnitSpec& u) {
  World& w = cx.world;
  const std::size_t cap = cx.params.channel_capacity;
  const bool overlap = cx.params.merge_overlap;
  ChannelId i_ch = cx.load(u.name + ".i", u.src, cap);
  ChannelId j_ch = cx.load(u.name + ".j", u.src, cap);
  std::optional<ChannelId> go_i, go_j;
  if (!overlap) {
    go_i = w.add_stream(u.name + ".go_i", 2);
    go_j = w.add_stream(u.name + ".go_j", 2);
  }
  std::vector<Segment> seg_i, seg_j;
  std::vector<UnitPass> plan;
  for (std::size_t p = 0; p < u.passes.size(); ++p) {
    auto merges = merges_of(n, u.passes[p]);
    for (std::size_t m = 0; m < merges.size(); ++m) {
      std::optional<ChannelId> ti, tj;
      if (m == 0 && u.passes[p] > 0) ti = u.pass_tok_i, tj = u.pass_tok_j;
      if (m > 0 && !overlap) ti = go_i, tj = go_j;
      seg_i.push_back({merges[m].l, merges[m].mid, ti});
      seg_j.push_back({merges[m].mid, merges[m].end, tj});
    }
    plan.push_back({std::move(merges), u.done_tokens[p]});
  }
  const Addr src = cx.base(u.src);
  UnitIds ids{};
  ids.acc_i = w.emplace<RangeAccess>(u.name + ".access_i", i_ch, src, std::move(seg_i)).first;
  ids.acc_j = w.emplace<RangeAccess>(u.name + ".access_j", j_ch, src, std::move(seg_j)).first;
  StoreSiteId site = cx.store_site(u.name + ".dst", u.dst);
  ids.exec =
      w.emplace<MergeExec>(u.name + ".exec", MergeExec::Io{i_ch, j_ch, site, cx.base(u.dst), go_i, go_j}, std::move(plan))
          .first;
  w.connect(i_ch, ids.acc_i, ids.exec);
  w.connect(j_ch, ids.acc_j, ids.exec);
  w.attach(site, ids.exec);
  if (go_i) {
    w.connect(*go_i, ids.exec, ids.acc_i);
    w.connect(*go_j, ids.exec, ids.acc_j);
  }
  return ids;
}

void build_plain(KernelContext& cx, std::uint64_t n, unsigned passes) {
  World& w = cx.world;
  ChannelId to_copy = w.add_stream("tok.merge_to_copy", 2);
  ChannelId to_i = w.add_stream("tok.copy_to_access_i", 2);
  ChannelId to_j = w.add_stream("tok.copy_to_access_j", 2);
  UnitSpec u{"merge", "table", "result", {}, to_i, to_j, {}};
  for (unsigned p = 0; p < passes; ++p) {
    u.passes.push_back(p);
    u.done_tokens.push_back(p + 1 < passes ? std::vector<ChannelId>{to_copy} : std::vector<ChannelId>{});
  }
  UnitIds m = build_unit(cx, n, u);

  const std::size_t rounds = passes - 1;
  ChannelId in = cx.load("copy.in", "result", cx.params.channel_capacity);
  std::vector<Segment> segs(rounds, Segment{0, n, to_copy});
  auto acc = w.emplace<RangeAccess>("copy.access", in, cx.base("result"), std::move(segs)).first;
  StoreSiteId site = cx.store_site("copy.dst", "table");
  auto exec = w.emplace<CopyExec>(in, site, cx.base("table"), n, rounds, to_i, to_j).first;
  w.connect(in, acc, exec);
  w.attach(site, exec);
  w.connect(to_copy, m.exec, acc);
  w.connect(to_i, exec, m.acc_i);
  w.connect(to_j, exec, m.acc_j);
}

// Two units swap source and destination on alternate passes instead of copying.
void build_pingpong(KernelContext& cx, std::uint64_t n, unsigned passes) {
  World& w = cx.world;
  const bool has_b = passes > 1;
  std::optional<ChannelId> a_i, a_j, b_i, b_j;
  if (has_b) {
    b_i = w.add_stream("tok.even_to_odd_i", 2);
    b_j = w.add_stream("tok.even_to_odd_j", 2);
  }
  if (passes > 2) {
    a_i = w.add_stream("tok.odd_to_even_i", 2);
    a_j = w.add_stream("tok.odd_to_even_j", 2);
  }
  UnitSpec a{"even", "table", "result", {}, a_i, a_j, {}};
  UnitSpec b{"odd", "result", "table", {}, b_i, b_j, {}};
  for (unsigned p = 0; p < passes; ++p) {
    UnitSpec& u = p % 2 == 0 ? a : b;
    const auto& next = p % 2 == 0 ? b : a;
    u.passes.push_back(p);
    u.done_tokens.push_back(p + 1 < passes ? std::vector<ChannelId>{*next.pass_tok_i, *next.pass_tok_j}
                                           : std::vector<ChannelId>{});
  }
  UnitIds ua = build_unit(cx, n, a);
  if (!has_b) return;
  UnitIds ub = build_unit(cx, n, b);
  w.connect(*b_i, ua.exec, ub.acc_i);
  w.connect(*b_j, ua.exec, ub.acc_j);
  if (a_i) {
    w.connect(*a_i, ub.exec, ua.acc_i);
    w.connect(*a_j, ub.exec, ua.acc_j);
  }
}

struct CoupledRegs {
  enum Phase : std::uint8_t { MergeStart, AwaitI, AwaitJ, Emit, PassDrain, CopyStart, Copy, CopyDrain };
  Phase phase = MergeStart;
  unsigned pass = 0;
  std::uint64_t l = 0, mid = 0, end = 0;
  std::uint64_t i = 0, j = 0, k = 0;
  Word ti = 0, tj = 0;
  bool need_j = false;
  bool done = false;
};

// Blocking loads, one outstanding at a time.
class CoupledMergesort final : public LoopProcess<CoupledRegs> {
 public:
  struct Io {
    ChannelId table_ld, result_ld;
    StoreSiteId table_st, result_st;
    Addr table, result;
  };
  CoupledMergesort(Io io, std::uint64_t n, unsigned passes, bool pingpong)
      : LoopProcess<CoupledRegs>(pingpong ? "mergesort_opt.coupled" : "mergesort.coupled",
                                 CoupledRegs{CoupledRegs::MergeStart, 0, 0, 0, 0, 0, 0, 0, 0, 0, false, passes == 0}),
        io_(io), n_(n), passes_(passes), pingpong_(pingpong) {}

 protected:
  void iterate(Tick& t, CoupledRegs& r) override {
    using P = CoupledRegs;
    switch (r.phase) {
      case P::MergeStart:
        open_merge(t, r, 0);
        return;
      case P::AwaitI: {
        auto v = t.decouple_response(src_ld(r));
        if (!v) return;
        r.ti = v->front();
        if (r.need_j) {
          r.need_j = false;
          t.decouple_request(src_ld(r), src(r) + kWordBytes * r.j);
          r.phase = P::AwaitJ;
        } else {
          r.phase = P::Emit;
        }
        return;
      }
      case P::AwaitJ: {
        auto v = t.decouple_response(src_ld(r));
        if (!v) return;
        r.tj = v->front();
        r.phase = P::Emit;
        return;
      }
      case P::Emit: {
        const bool take_i = r.i < r.mid && (r.j >= r.end || r.ti <= r.tj);
        t.store(dst_st(r), dst(r) + kWordBytes * r.k, take_i ? r.ti : r.tj);
        ++r.k;
        if (take_i) ++r.i;
        else ++r.j;
        if (r.k == r.end) {
          if (r.end < n_) open_merge(t, r, r.end);
          else r.phase = P::PassDrain;
        } else if (take_i && r.i < r.mid) {
          t.decouple_request(src_ld(r), src(r) + kWordBytes * r.i);
          r.phase = P::AwaitI;
        } else if (!take_i && r.j < r.end) {
          t.decouple_request(src_ld(r), src(r) + kWordBytes * r.j);
          r.phase = P::AwaitJ;
        }
        return;
      }
      case P::PassDrain:
        if (!t.stores_drained(dst_st(r))) return;
        if (!pingpong_ && r.pass + 1 < passes_) r.phase = P::CopyStart;
        else next_pass(r);
        return;
      case P::CopyStart:
        r.k = 0;
        t.decouple_request(io_.result_ld, io_.result);
        r.phase = P::Copy;
        return;
      case P::Copy: {
        auto v = t.decouple_response(io_.result_ld);
        if (!v) return;
        t.store(io_.table_st, io_.table + kWordBytes * r.k, v->front());
        if (++r.k < n_) t.decouple_request(io_.result_ld, io_.result + kWordBytes * r.k);
        else r.phase = P::CopyDrain;
        return;
      }
      case P::CopyDrain:
        if (!t.stores_drained(io_.table_st)) return;
        next_pass(r);
        return;
    }
  }

 private:
  bool reversed(const CoupledRegs& r) const { return pingpong_ && r.pass % 2 == 1; }
  ChannelId src_ld(const CoupledRegs& r) const { return reversed(r) ? io_.result_ld : io_.table_ld; }
  Addr src(const CoupledRegs& r) const { return reversed(r) ? io_.result : io_.table; }
  StoreSiteId dst_st(const CoupledRegs& r) const { return reversed(r) ? io_.table_st : io_.result_st; }
  Addr dst(const CoupledRegs& r) const { return reversed(r) ? io_.table : io_.result; }

  void open_merge(Tick& t, CoupledRegs& r, std::uint64_t l) const {
    const std::uint64_t w = std::uint64_t{1} << r.pass;
    r.l = r.i = r.k = l;
    r.mid = r.j = std::min(l + w, n_);
    r.end = std::min(l + 2 * w, n_);
    r.need_j = r.mid < r.end;
    t.decouple_request(src_ld(r), src(r) + kWordBytes * r.i);
    r.phase = CoupledRegs::AwaitI;
  }
  void next_pass(CoupledRegs& r) const {
    if (++r.pass == passes_) r.done = true;
    else r.phase = CoupledRegs::MergeStart;
  }

  Io io_;
  std::uint64_t n_;
  unsigned passes_;
  bool pingpong_;
};

}  // namespace

void build_mergesort(KernelContext& cx, std::size_t n, bool opt) {
  const unsigned passes = pass_count(n);
  if (passes == 0) return;
  if (cx.params.coupling == Coupling::Coupled) {
    World& w = cx.world;
    CoupledMergesort::Io io{cx.load("table", "table", 2), cx.load("result", "result", 2),
                            cx.store_site("table", "table"), cx.store_site("result", "result"), cx.base("table"),
                            cx.base("result")};
    auto pid = w.emplace<CoupledMergesort>(io, n, passes, opt).first;
    w.connect(io.table_ld, pid, pid);
    w.connect(io.result_ld, pid, pid);
    w.attach(io.table_st, pid);
    w.attach(io.result_st, pid);
    return;
  }
  if (opt) build_pingpong(cx, n, passes);
  else build_plain(cx, n, passes);
}

}  // namespace daesim::detail
