#pragma once

#include <bit>
#include <cstring>
#include <fstream>

#include "landau/precompute.hpp"

namespace landau {

// LNDT1 layout (all little-endian):
//   "LNDT1"                       5 bytes
//   u32 d
//   f64 intervals[2d]             (lo, hi) per axis
//   u32 modes[d]
//   u8  has_box, then f64 box bounds[2d] when set
//   u32 kernel tag, f64 kernel params[4]
//   u32 refinement, u32 scope (0 local, 1 whole)
//   u64 table count, then per table: u64 length, length x (f64 re, f64 im)
// Tables in order: psi, S_ij for each pair, W_ij for each pair.

namespace detail {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error(ErrorCode::IoError, "truncated table file");
  return to_little(v);
}

}  // namespace detail

inline void write_tables(std::ostream& os, const PrecomputedTables& t) {
  using detail::put;
  const auto& d = *t.domain;
  os.write("LNDT1", 5);
  put<std::uint32_t>(os, d.dim);
  for (const auto& iv : d.intervals) {
    put<double>(os, iv.lo);
    put<double>(os, iv.hi);
  }
  for (int m : d.modes) put<std::uint32_t>(os, m);
  put<std::uint8_t>(os, d.box ? 1 : 0);
  if (d.box)
    for (const auto& b : d.box->bounds) {
      put<double>(os, b.lo);
      put<double>(os, b.hi);
    }
  put<std::uint32_t>(os, t.kernel.tag());
  for (double p : t.kernel.params()) put<double>(os, p);
  put<std::uint32_t>(os, t.refinement);
  put<std::uint32_t>(os, t.scope == QuadratureScope::Local ? 0 : 1);

  std::vector<const std::vector<cplx>*> tables{&t.psi};
  for (const auto& s : t.S) tables.push_back(&s);
  for (const auto& w : t.W) tables.push_back(&w);
  put<std::uint64_t>(os, tables.size());
  for (const auto* tab : tables) {
    put<std::uint64_t>(os, tab->size());
    for (const auto& z : *tab) {
      put<double>(os, z.real());
      put<double>(os, z.imag());
    }
  }
  if (!os) throw Error(ErrorCode::IoError, "failed writing table file");
}

inline PrecomputedTables read_tables(std::istream& is) {
  using detail::get;
  char magic[5] = {};
  is.read(magic, 5);
  if (!is || std::memcmp(magic, "LNDT1", 5) != 0) throw Error(ErrorCode::VersionMismatch, "not an LNDT1 table file");
  int d = static_cast<int>(get<std::uint32_t>(is));
  if (d < 2 || d > 3) throw Error(ErrorCode::VersionMismatch, "bad dimension in table file");
  std::vector<Interval> iv(d);
  for (auto& i : iv) {
    i.lo = get<double>(is);
    i.hi = get<double>(is);
  }
  std::vector<int> modes(d);
  for (auto& m : modes) m = static_cast<int>(get<std::uint32_t>(is));
  std::vector<double> halfwidths;
  if (get<std::uint8_t>(is)) {
    for (int a = 0; a < d; ++a) {
      get<double>(is);
      halfwidths.push_back(get<double>(is));
    }
  }
  int tag = static_cast<int>(get<std::uint32_t>(is));
  std::array<double, 4> params{};
  for (auto& p : params) p = get<double>(is);

  PrecomputedTables t;
  t.domain = build_domain(iv, modes, halfwidths);
  t.kernel = KernelSpec::from_tag(d, tag, params);
  t.refinement = static_cast<int>(get<std::uint32_t>(is));
  t.scope = get<std::uint32_t>(is) == 0 ? QuadratureScope::Local : QuadratureScope::WholeDomain;
  detail::finish_tables(t);

  std::size_t np = symmetric_pairs(d).size();
  std::uint64_t count = get<std::uint64_t>(is);
  if (count != 1 + 2 * np) throw Error(ErrorCode::VersionMismatch, "unexpected table count");
  std::vector<std::vector<cplx>> tabs(count);
  for (auto& tab : tabs) {
    std::uint64_t len = get<std::uint64_t>(is);
    if (len != t.domain->size()) throw Error(ErrorCode::VersionMismatch, "unexpected table length");
    tab.resize(len);
    for (auto& z : tab) {
      double re = get<double>(is);
      double im = get<double>(is);
      z = cplx(re, im);
    }
  }
  t.psi = std::move(tabs[0]);
  for (std::size_t p = 0; p < np; ++p) t.S.push_back(std::move(tabs[1 + p]));
  for (std::size_t p = 0; p < np; ++p) t.W.push_back(std::move(tabs[1 + np + p]));
  if (t.scope == QuadratureScope::WholeDomain) t.psi_single_mode = false;
  t.residue_empty = true;
  for (const auto& w : t.W)
    for (const auto& z : w)
      if (z != cplx(0.0)) t.residue_empty = false;
  detail::fill_psi_phase(t);
  return t;
}

inline void save_tables(const std::string& path, const PrecomputedTables& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  write_tables(os, t);
}

inline PrecomputedTables load_tables(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_tables(is);
}

}  // namespace landau
