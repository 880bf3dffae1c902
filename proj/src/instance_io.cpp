#include "probelab/instance_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace probelab::io {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

int64_t want_int(std::istringstream& ss, int line_no, const char* field) {
    int64_t v;
    if (!(ss >> v)) fail(line_no, std::string("missing or bad ") + field);
    return v;
}

uint32_t want_hex(std::istringstream& ss, int line_no, const char* field) {
    std::string tok;
    if (!(ss >> tok)) fail(line_no, std::string("missing ") + field);
    uint32_t v = 0;
    size_t pos = 0;
    try {
        unsigned long parsed = std::stoul(tok, &pos, 16);
        v = uint32_t(parsed);
        if (parsed > 0xffffffffUL) pos = 0;
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size() || tok.empty()) fail(line_no, std::string("bad hex ") + field);
    return v;
}

void want_end(std::istringstream& ss, int line_no) {
    std::string extra;
    if (ss >> extra) fail(line_no, "trailing token '" + extra + "'");
}

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

ParityFile parse_parity(std::istream& in) {
    ParityFile f;
    bool have_param = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (skippable(line)) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "param") {
            if (have_param) fail(line_no, "duplicate param record");
            f.inst.ell = int(want_int(ss, line_no, "ell"));
            f.inst.B = int(want_int(ss, line_no, "B"));
            want_end(ss, line_no);
            if (f.inst.ell < 1 || f.inst.B < 2) fail(line_no, "need ell >= 1 and B >= 2");
            have_param = true;
        } else if (tag == "u") {
            if (!have_param) fail(line_no, "u before param");
            parity::Update u;
            u.graph = int(want_int(ss, line_no, "epoch"));
            u.edge.level = int(want_int(ss, line_no, "level"));
            u.edge.from_index = want_int(ss, line_no, "from_index");
            u.edge.to_digit = int(want_int(ss, line_no, "to_digit"));
            u.weight = int(want_int(ss, line_no, "weight"));
            want_end(ss, line_no);
            f.updates.push_back(u);
        } else if (tag == "q") {
            if (!have_param) fail(line_no, "q before param");
            parity::Query q;
            q.s = want_int(ss, line_no, "s");
            q.t = want_int(ss, line_no, "t");
            want_end(ss, line_no);
            f.queries.push_back(q);
        } else {
            fail(line_no, "unknown record '" + tag + "'");
        }
    }
    if (!have_param) throw std::runtime_error("missing param record");
    return f;
}

ParityFile parse_parity_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_parity(in);
}

void emit_parity(std::ostream& out, const ParityFile& f) {
    out << "param " << f.inst.ell << ' ' << f.inst.B << '\n';
    for (const parity::Update& u : f.updates)
        out << "u " << u.graph << ' ' << u.edge.level << ' ' << u.edge.from_index << ' '
            << u.edge.to_digit << ' ' << u.weight << '\n';
    for (const parity::Query& q : f.queries) out << "q " << q.s << ' ' << q.t << '\n';
}

PolyFile parse_poly(std::istream& in) {
    PolyFile f;
    bool have_param = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (skippable(line)) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "pparam") {
            if (have_param) fail(line_no, "duplicate pparam record");
            f.d = int(want_int(ss, line_no, "d"));
            f.n = int(want_int(ss, line_no, "n"));
            want_end(ss, line_no);
            if (f.d < 1 || f.d > 16 || f.n < 0) fail(line_no, "need 1 <= d <= 16 and n >= 0");
            have_param = true;
        } else if (tag == "pu") {
            if (!have_param) fail(line_no, "pu before pparam");
            int i = int(want_int(ss, line_no, "i"));
            uint32_t b = want_hex(ss, line_no, "b");
            want_end(ss, line_no);
            f.updates.emplace_back(i, b);
        } else if (tag == "pq") {
            if (!have_param) fail(line_no, "pq before pparam");
            uint32_t y = want_hex(ss, line_no, "y");
            want_end(ss, line_no);
            f.queries.push_back(y);
        } else {
            fail(line_no, "unknown record '" + tag + "'");
        }
    }
    if (!have_param) throw std::runtime_error("missing pparam record");
    return f;
}

PolyFile parse_poly_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_poly(in);
}

void emit_poly(std::ostream& out, const PolyFile& f) {
    out << "pparam " << f.d << ' ' << f.n << '\n';
    char buf[16];
    for (auto [i, b] : f.updates) {
        snprintf(buf, sizeof buf, "%x", b);
        out << "pu " << i << ' ' << buf << '\n';
    }
    for (uint32_t y : f.queries) {
        snprintf(buf, sizeof buf, "%x", y);
        out << "pq " << buf << '\n';
    }
}

} // namespace probelab::io
