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


#include "blocks.hpp"

namespace daesim::detail {

namespace {

Word mac(Word sum, Word a, Word x) { return word_from_float(word_to_float(sum) + word_to_float(a) * word_to_float(x)); }
Word scaled(Word v, float scale) { return word_from_float(word_to_float(v) * scale); }

struct SpmvChannels {
  ChannelId rows, cols, val, vec;
  StoreSiteId out;
};

struct AccessRegs {
  std::uint32_t t = 0;
  std::uint64_t j = 0;
  bool have_token = false;
  bool done = false;
};

// Turns each prefetched column index into a val request and a vec request.
class SpmvAccess final : public LoopProcess<AccessRegs> {
 public:
  SpmvAccess(SpmvChannels ch, Addr val, Addr vec, std::uint64_t nnz, std::uint32_t iterations,
             std::optional<ChannelId> go)
      : LoopProcess<AccessRegs>("spmv.access", AccessRegs{0, 0, false, nnz == 0}),
        ch_(ch), val_(val), vec_(vec), nnz_(nnz), iterations_(iterations), go_(go) {}

 protected:
  void iterate(Tick& t, AccessRegs& r) override {
    if (go_ && r.t > 0 && !r.have_token) {
      if (!t.stream_deq(*go_)) return;
      r.have_token = true;
    }
    auto c = t.decouple_response(ch_.cols);
    if (!c) return;
    t.decouple_request(ch_.val, val_ + kWordBytes * r.j);
    t.decouple_request(ch_.vec, vec_ + kWordBytes * c->front());
    if (++r.j < nnz_) return;
    r.j = 0;
    r.have_token = false;
    if (++r.t == iterations_) r.done = true;
  }

 private:
  SpmvChannels ch_;
  Addr val_, vec_;
  std::uint64_t nnz_;
  std::uint32_t iterations_;
  std::optional<ChannelId> go_;
};

struct ExecRegs {
  enum Phase : std::uint8_t { Start, Header, Mac, Drain };
  Phase phase = Start;
  std::uint32_t t = 0;
  std::uint32_t i = 0;
  std::uint64_t j = 0;
  Word prev = 0;
  Word end = 0;
  Word sum = 0;
  bool done = false;
};

// Row loop: reads each row bound, then multiplies and accumulates the
// responses of that row's val and vec requests.
class SpmvExec final : public LoopProcess<ExecRegs> {
 public:
  SpmvExec(SpmvChannels ch, Addr out, std::uint32_t rows, std::uint32_t iterations, std::optional<ChannelId> done_tok)
      : LoopProcess<ExecRegs>("spmv.exec", ExecRegs{}), ch_(ch), out_(out), rows_(rows), iterations_(iterations),
        done_tok_(done_tok) {}

 protected:
  void iterate(Tick& t, ExecRegs& r) override {
    switch (r.phase) {
      case ExecRegs::Start: {
        auto v = t.decouple_response(ch_.rows);
        if (!v) return;
        r.prev = v->front();
        r.i = 0;
        r.phase = rows_ == 0 ? ExecRegs::Drain : ExecRegs::Header;
        return;
      }
      case ExecRegs::Header: {
        auto v = t.decouple_response(ch_.rows);
        if (!v) return;
        r.j = r.prev;
        r.end = v->front();
        r.prev = r.end;
        r.sum = word_from_float(0.0f);
        if (r.j >= r.end) finish_row(t, r);
        else r.phase = ExecRegs::Mac;
        return;
      }
      case ExecRegs::Mac: {
        auto a = t.decouple_response(ch_.val);
        if (!a) return;
        auto x = t.decouple_response(ch_.vec);
        if (!x) return;
        r.sum = mac(r.sum, a->front(), x->front());
        if (++r.j >= r.end) finish_row(t, r);
        return;
      }
      case ExecRegs::Drain:
        if (!t.stores_drained(ch_.out)) return;
        if (done_tok_) t.stream_enq(*done_tok_, 0);
        if (++r.t == iterations_) r.done = true;
        else r.phase = ExecRegs::Start;
        return;
    }
  }

 private:
  void finish_row(Tick& t, ExecRegs& r) {
    t.store(ch_.out, out_ + kWordBytes * r.i, r.sum);
    r.phase = ++r.i == rows_ ? ExecRegs::Drain : ExecRegs::Header;
  }

  SpmvChannels ch_;
  Addr out_;
  std::uint32_t rows_;
  std::uint32_t iterations_;
  std::optional<ChannelId> done_tok_;
};

struct ScaleRegs {
  std::uint32_t t = 0;
  std::uint32_t i = 0;
  bool draining = false;
  bool done = false;
};

// vec[i] = out[i] * scale after every iteration.
class ScaleExec final : public LoopProcess<ScaleRegs> {
 public:
  ScaleExec(ChannelId out_ch, StoreSiteId vec_site, Addr vec, std::uint32_t n, std::uint32_t iterations, float scale,
            ChannelId go)
      : LoopProcess<ScaleRegs>("scale.exec", ScaleRegs{}), out_ch_(out_ch), site_(vec_site), vec_(vec), n_(n),
        iterations_(iterations), scale_(scale), go_(go) {}

 protected:
  void iterate(Tick& t, ScaleRegs& r) override {
    if (r.draining) {
      if (!t.stores_drained(site_)) return;
      if (r.t + 1 < iterations_) t.stream_enq(go_, 0);
      r.draining = false;
      r.i = 0;
      if (++r.t == iterations_) r.done = true;
      return;
    }
    auto v = t.decouple_response(out_ch_);
    if (!v) return;
    t.store(site_, vec_ + kWordBytes * r.i, scaled(v->front(), scale_));
    if (++r.i == n_) r.draining = true;
  }

 private:
  ChannelId out_ch_;
  StoreSiteId site_;
  Addr vec_;
  std::uint32_t n_;
  std::uint32_t iterations_;
  float scale_;
  ChannelId go_;
};

struct CoupledRegs {
  enum Phase : std::uint8_t { Start, RowBase, RowEnd, ValCol, Vec, Drain, CopyStart, Copy, CopyDrain };
  Phase phase = Start;
  std::uint32_t t = 0;
  std::uint32_t i = 0;
  std::uint64_t j = 0;
  Word prev = 0;
  Word end = 0;
  Word sum = 0;
  Word a = 0;
  bool done = false;
};

// Single loop nest with blocking loads; the multi-iteration form appends the
// scale-and-copy loop after every product.
class CoupledSpmv final : public LoopProcess<CoupledRegs> {
 public:
  struct Bases {
    Addr rows, cols, val, vec, out;
  };
  struct Io {
    ChannelId rows, cols, val, vec, out;
    StoreSiteId out_site, vec_site;
  };
  CoupledSpmv(Io io, Bases b, std::uint32_t n_rows, std::uint32_t iterations, bool copy, float scale)
      : LoopProcess<CoupledRegs>(copy ? "multispmv.coupled" : "spmv.coupled", CoupledRegs{}), io_(io), b_(b),
        n_rows_(n_rows), iterations_(iterations), copy_(copy), scale_(scale) {}

 protected:
  void iterate(Tick& t, CoupledRegs& r) override {
    using P = CoupledRegs;
    switch (r.phase) {
      case P::Start:
        t.decouple_request(io_.rows, b_.rows);
        r.i = 0;
        r.phase = P::RowBase;
        return;
      case P::RowBase: {
        auto v = t.decouple_response(io_.rows);
        if (!v) return;
        r.prev = v->front();
        if (n_rows_ == 0) {
          r.phase = P::Drain;
          return;
        }
        t.decouple_request(io_.rows, b_.rows + kWordBytes * (r.i + 1));
        r.phase = P::RowEnd;
        return;
      }
      case P::RowEnd: {
        auto v = t.decouple_response(io_.rows);
        if (!v) return;
        r.j = r.prev;
        r.end = v->front();
        r.prev = r.end;
        r.sum = word_from_float(0.0f);
        if (r.j >= r.end) return finish_row(t, r);
        request_element(t, r);
        return;
      }
      case P::ValCol: {
        auto a = t.decouple_response(io_.val);
        if (!a) return;
        auto c = t.decouple_response(io_.cols);
        if (!c) return;
        r.a = a->front();
        t.decouple_request(io_.vec, b_.vec + kWordBytes * c->front());
        r.phase = P::Vec;
        return;
      }
      case P::Vec: {
        auto x = t.decouple_response(io_.vec);
        if (!x) return;
        r.sum = mac(r.sum, r.a, x->front());
        if (++r.j >= r.end) return finish_row(t, r);
        request_element(t, r);
        return;
      }
      case P::Drain:
        if (!t.stores_drained(io_.out_site)) return;
        if (copy_) {
          r.phase = P::CopyStart;
          return;
        }
        next_iteration(r);
        return;
      case P::CopyStart:
        r.i = 0;
        t.decouple_request(io_.out, b_.out);
        r.phase = P::Copy;
        return;
      case P::Copy: {
        auto v = t.decouple_response(io_.out);
        if (!v) return;
        t.store(io_.vec_site, b_.vec + kWordBytes * r.i, scaled(v->front(), scale_));
        if (++r.i < n_rows_) t.decouple_request(io_.out, b_.out + kWordBytes * r.i);
        else r.phase = P::CopyDrain;
        return;
      }
      case P::CopyDrain:
        if (!t.stores_drained(io_.vec_site)) return;
        next_iteration(r);
        return;
    }
  }

 private:
  void request_element(Tick& t, CoupledRegs& r) {
    t.decouple_request(io_.val, b_.val + kWordBytes * r.j);
    t.decouple_request(io_.cols, b_.cols + kWordBytes * r.j);
    r.phase = CoupledRegs::ValCol;
  }
  void finish_row(Tick& t, CoupledRegs& r) {
    t.store(io_.out_site, b_.out + kWordBytes * r.i, r.sum);
    if (++r.i == n_rows_) {
      r.phase = CoupledRegs::Drain;
      return;
    }
    t.decouple_request(io_.rows, b_.rows + kWordBytes * (r.i + 1));
    r.phase = CoupledRegs::RowEnd;
  }
  void next_iteration(CoupledRegs& r) {
    if (++r.t == iterations_) r.done = true;
    else r.phase = CoupledRegs::Start;
  }

  Io io_;
  Bases b_;
  std::uint32_t n_rows_;
  std::uint32_t iterations_;
  bool copy_;
  float scale_;
};

void build(KernelContext& cx, const CsrMatrix& m, std::uint32_t iterations, bool copy, float scale) {
  World& w = cx.world;
  const Addr rows = cx.base("rows"), cols = cx.base("cols"), val = cx.base("val"), vec = cx.base("vec"),
             out = cx.base("out");
  const std::uint64_t nnz = m.nnz();

  if (cx.params.coupling == Coupling::Coupled) {
    CoupledSpmv::Io io{cx.load("rows", "rows", 2), cx.load("cols", "cols", 2), cx.load("val", "val", 2),
                       cx.load("vec", "vec", 2),   cx.load("out", "out", 2),   cx.store_site("out", "out"),
                       cx.store_site("vec", "vec")};
    auto [pid, p] = w.emplace<CoupledSpmv>(io, CoupledSpmv::Bases{rows, cols, val, vec, out}, m.n_rows, iterations,
                                           copy, scale);
    for (ChannelId ch : {io.rows, io.cols, io.val, io.vec, io.out}) w.connect(ch, pid, pid);
    w.attach(io.out_site, pid);
    w.attach(io.vec_site, pid);
    return;
  }

  const std::size_t cap = cx.params.channel_capacity;
  // Creation order fixes the order balance violations are reported in.
  SpmvChannels ch{cx.load("rows", "rows", cap), cx.load("cols", "cols", cap), cx.load("val", "val", cap),
                  cx.load("vec", "vec", cap), cx.store_site("out", "out")};
  std::vector<Segment> row_segs, col_segs;
  for (std::uint32_t t = 0; t < iterations; ++t) {
    row_segs.push_back({0, static_cast<std::uint64_t>(m.n_rows) + 1, std::nullopt});
    col_segs.push_back({0, nnz, std::nullopt});
  }
  std::optional<ChannelId> exec_done, scale_done;
  if (copy) {
    exec_done = w.add_stream("tok.exec_to_scale", 2);
    scale_done = w.add_stream("tok.scale_to_access", 2);
  }
  auto rid = w.emplace<RangeAccess>("rows.access", ch.rows, rows, row_segs).first;
  auto cid = w.emplace<RangeAccess>("cols.access", ch.cols, cols, col_segs).first;
  auto aid = w.emplace<SpmvAccess>(ch, val, vec, nnz, iterations, scale_done).first;
  auto eid = w.emplace<SpmvExec>(ch, out, m.n_rows, iterations, exec_done).first;
  w.connect(ch.rows, rid, eid);
  w.connect(ch.cols, cid, aid);
  w.connect(ch.val, aid, eid);
  w.connect(ch.vec, aid, eid);
  w.attach(ch.out, eid);
  if (!copy) return;

  ChannelId out_ch = cx.load("out", "out", cap);
  StoreSiteId vec_site = cx.store_site("vec", "vec");
  std::vector<Segment> out_segs;
  for (std::uint32_t t = 0; t < iterations; ++t) out_segs.push_back({0, m.n_rows, exec_done});
  auto sa = w.emplace<RangeAccess>("scale.access", out_ch, out, out_segs).first;
  ChannelId go = *scale_done;
  auto se = w.emplace<ScaleExec>(out_ch, vec_site, vec, m.n_rows, iterations, scale, go).first;
  w.connect(*exec_done, eid, sa);
  w.connect(out_ch, sa, se);
  w.connect(go, se, aid);
  w.attach(vec_site, se);
}

}  // namespace

void build_spmv(KernelContext& cx, const CsrMatrix& m) { build(cx, m, 1, false, 1.0f); }

void build_multispmv(KernelContext& cx, const MultiSpmvWorkload& w) {
  build(cx, w.matrix, w.iterations, true, w.scale);
}

}  // namespace daesim::detail
