#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "probelab/parity_search.hpp"

namespace probelab::io {

// Text interchange for parity-searching instances, one record per line:
//   param <ell> <B>
//   u <epoch> <level> <from_index> <to_digit> <weight>
//   q <s> <t>
// Blank lines and lines starting with '#' are skipped.
struct ParityFile {
    parity::Instance inst;
    std::vector<parity::Update> updates;
    std::vector<parity::Query> queries;
};

ParityFile parse_parity(std::istream& in);
ParityFile parse_parity_file(const std::string& path);
void emit_parity(std::ostream& out, const ParityFile& f);

// Least-bit polynomial evaluation instances:
//   pparam <d> <n>
//   pu <i> <b-hex>
//   pq <y-hex>
struct PolyFile {
    int d = 0;  // field extension degree
    int n = 0;  // coefficient degree bound
    std::vector<std::pair<int, uint32_t>> updates;
    std::vector<uint32_t> queries;
};

PolyFile parse_poly(std::istream& in);
PolyFile parse_poly_file(const std::string& path);
void emit_poly(std::ostream& out, const PolyFile& f);

} // namespace probelab::io
