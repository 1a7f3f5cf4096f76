// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sqdrift/errors.hpp"
#include "sqdrift/hamiltonian.hpp"

namespace sqdrift {

namespace detail {

inline std::string fcidump_token_error(const std::string& what, const std::string& token,
                                       int line) {
  std::ostringstream os;
  os << "FCIDUMP parse error at line " << line << ": " << what << " ('" << token << "')";
  return os.str();
}

inline bool parse_int(const std::string& tok, long& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool parse_real(const std::string& tok, double& out) {
  // Fortran writers may emit D exponents.
  std::string t = tok;
  for (char& c : t)
    if (c == 'D' || c == 'd') c = 'E';
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

/// Canonical representative of (pq|rs) under the 8-fold symmetry group.
inline std::array<int, 4> canonical_eri_slot(int p, int q, int r, int s) {
  auto ord = [](int a, int b) { return a >= b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a}; };
  auto pq = ord(p, q);
  auto rs = ord(r, s);
  if (pq[0] < rs[0] || (pq[0] == rs[0] && pq[1] < rs[1])) std::swap(pq, rs);
  return {pq[0], pq[1], rs[0], rs[1]};
}

}  // namespace detail

/// Parses an FCIDUMP stream (namelist header + "value i j k l" lines).
///
/// Both comma- and whitespace-separated namelists are accepted; indices are
/// 1-based in the file. Duplicate entries for the same canonical slot are
/// accepted last-wins when consistent within 1e-10 and rejected otherwise.
inline MolecularHamiltonian parse_fcidump(std::istream& in) {
  std::string line;
  int line_no = 0;

  // ---- header ----
  std::optional<long> norb, nelec;
  long ms2 = 0;
  std::vector<int> orbsym;
  bool header_done = false;
  std::string current_key;

  auto header_tokens = [](std::string s) {
    for (char& c : s)
      if (c == ',') c = ' ';
    std::istringstream is(s);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
  };

  while (!header_done && std::getline(in, line)) {
    ++line_no;
    for (std::string tok : header_tokens(line)) {
      if (tok == "&END" || tok == "$END" || tok == "/" || tok == "&end" || tok == "$end") {
        header_done = true;
        break;
      }
      if (tok.rfind("&", 0) == 0 || tok.rfind("$", 0) == 0) {
        current_key.clear();  // namelist name token ("&FCI")
        continue;
      }
      std::string key, value;
      auto eq = tok.find('=');
      if (eq != std::string::npos) {
        key = tok.substr(0, eq);
        value = tok.substr(eq + 1);
        if (key.empty()) throw ParseError(detail::fcidump_token_error("empty key", tok, line_no));
        for (char& c : key) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        current_key = key;
        if (value.empty()) continue;
      } else {
        value = tok;
      }
      if (current_key.empty())
        throw ParseError(detail::fcidump_token_error("value with no key", tok, line_no));
      long iv = 0;
      if (!detail::parse_int(value, iv))
        throw ParseError(detail::fcidump_token_error("expected integer for " + current_key, value,
                                                     line_no));
      if (current_key == "NORB")
        norb = iv;
      else if (current_key == "NELEC")
        nelec = iv;
      else if (current_key == "MS2")
        ms2 = iv;
      else if (current_key == "ORBSYM")
        orbsym.push_back(static_cast<int>(iv));
      // other keys (ISYM, IUHF, ...) are accepted and ignored
    }
  }
  if (!header_done) throw ParseError("FCIDUMP parse error: header terminator (&END or /) missing");
  if (!norb) throw ParseError("FCIDUMP parse error: NORB missing from header");
  if (!nelec) throw ParseError("FCIDUMP parse error: NELEC missing from header");
  if (*norb < 0 || *norb > kMaxOrbitals)
    throw ParseError("FCIDUMP parse error: NORB out of supported range [0, 64]");
  if (!orbsym.empty() && static_cast<long>(orbsym.size()) != *norb)
    throw ParseError("FCIDUMP parse error: ORBSYM length does not match NORB");

  MolecularHamiltonian ham(static_cast<int>(*norb), static_cast<int>(*nelec),
                           static_cast<int>(ms2));
  ham.set_orbital_symmetries(orbsym);

  // ---- integral lines ----
  const int n = ham.n_orbitals();
  std::map<std::array<int, 4>, double> seen;  // canonical slot -> stored value
  bool core_seen = false;
  double core_value = 0.0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream is(line);
    std::string vtok;
    if (!(is >> vtok)) continue;  // blank line
    double value = 0.0;
    if (!detail::parse_real(vtok, value))
      throw ParseError(detail::fcidump_token_error("expected real value", vtok, line_no));
    long idx[4];
    for (int k = 0; k < 4; ++k) {
      std::string itok;
      if (!(is >> itok))
        throw ParseError(detail::fcidump_token_error("expected four orbital indices", line,
                                                     line_no));
      if (!detail::parse_int(itok, idx[k]))
        throw ParseError(detail::fcidump_token_error("expected integer index", itok, line_no));
      if (idx[k] < 0 || idx[k] > n)
        throw ParseError(detail::fcidump_token_error("orbital index out of range", itok, line_no));
    }
    std::string extra;
    if (is >> extra)
      throw ParseError(detail::fcidump_token_error("trailing token on integral line", extra,
                                                   line_no));

    const long i = idx[0], j = idx[1], k = idx[2], l = idx[3];
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (core_seen && std::abs(core_value - value) > 1e-10)
        throw DataError("FCIDUMP data error: inconsistent duplicate core-energy entries");
      core_seen = true;
      core_value = value;
      ham.set_core_energy(value);
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0)
        throw ParseError(detail::fcidump_token_error("one-body line with zero orbital index", line,
                                                     line_no));
      std::array<int, 4> slot = {static_cast<int>(std::max(i, j)),
                                 static_cast<int>(std::min(i, j)), 0, 0};
      auto it = seen.find(slot);
      if (it != seen.end() && std::abs(it->second - value) > 1e-10)
        throw DataError("FCIDUMP data error: inconsistent duplicate one-body entry at line " +
                        std::to_string(line_no));
      seen[slot] = value;
      ham.set_h1(static_cast<int>(i) - 1, static_cast<int>(j) - 1, value);
    } else if (i != 0 && j != 0 && k != 0 && l != 0) {
      auto slot = detail::canonical_eri_slot(static_cast<int>(i), static_cast<int>(j),
                                             static_cast<int>(k), static_cast<int>(l));
      auto it = seen.find(slot);
      if (it != seen.end() && std::abs(it->second - value) > 1e-10)
        throw DataError("FCIDUMP data error: inconsistent duplicate two-body entry at line " +
                        std::to_string(line_no));
      seen[slot] = value;
      ham.set_eri(static_cast<int>(i) - 1, static_cast<int>(j) - 1, static_cast<int>(k) - 1,
                  static_cast<int>(l) - 1, value);
    } else {
      throw ParseError(detail::fcidump_token_error("unrecognized index pattern", line, line_no));
    }
  }
  return ham;
}

inline MolecularHamiltonian parse_fcidump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open FCIDUMP file: " + path);
  return parse_fcidump(in);
}

/// Writes the canonical-slot representatives, 17 significant digits.
inline void write_fcidump(std::ostream& out, const MolecularHamiltonian& ham) {
  const int n = ham.n_orbitals();
  out << "&FCI NORB=" << n << ",NELEC=" << ham.n_electrons() << ",MS2=" << ham.spin_projection()
      << ",\n ORBSYM=";
  const auto& syms = ham.orbital_symmetries();
  for (int p = 0; p < n; ++p) out << (syms.empty() ? 1 : syms[p]) << ",";
  out << "\n ISYM=1,\n&END\n";

  char buf[128];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof(buf), "%25.17E %3d %3d %3d %3d\n", v, i, j, k, l);
    out << buf;
  };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r) {
        const int s_max = (r == p) ? q : r;
        for (int s = 0; s <= s_max; ++s)
          if (ham.eri(p, q, r, s) != 0.0)
            emit(ham.eri(p, q, r, s), p + 1, q + 1, r + 1, s + 1);
      }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      if (ham.h1(p, q) != 0.0) emit(ham.h1(p, q), p + 1, q + 1, 0, 0);
  emit(ham.core_energy(), 0, 0, 0, 0);
}

inline void write_fcidump_file(const std::string& path, const MolecularHamiltonian& ham) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  write_fcidump(out, ham);
}

}  // namespace sqdrift
