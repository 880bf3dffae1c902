// Single-binary orchestration: instance generation, solver cross-checks,
// polynomial certificates, and protocol experiments. Every subcommand is a
// pure function of its flags and seed, so reruns are byte-identical.
#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "probelab/cellprobe_sim.hpp"
#include "probelab/instance_io.hpp"
#include "probelab/parity_search.hpp"
#include "probelab/peak_to_average.hpp"
#include "probelab/reductions.hpp"
#include "probelab/rng.hpp"
#include "probelab/signed_table.hpp"
#include "probelab/symmetric_poly.hpp"
#include "probelab/tightness.hpp"

namespace {

using namespace probelab;

// "-" means stdout; anything else is a file we create or truncate.
class OutStream {
public:
    explicit OutStream(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// Deliberately wrong driver for negative-control runs: flips every answer.
class CorruptedSolver : public reductions::ParitySolver {
public:
    explicit CorruptedSolver(const parity::Instance& inst) : inner_(inst) {}
    void apply_update(const parity::Update& u) override { inner_.apply_update(u); }
    int answer(const parity::Query& q) override { return 1 - inner_.answer(q); }
    std::string name() const override { return "corrupted"; }

private:
    reductions::ReferenceSolver inner_;
};

std::unique_ptr<reductions::ParitySolver> solver_by_name(const std::string& name,
                                                         const parity::Instance& inst) {
    if (name == "corrupted") return std::make_unique<CorruptedSolver>(inst);
    return reductions::make_solver(name, inst);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOpts {
    int ell = 2, B = 2;
    bool poly = false;
    int d = 4, n = 3;
    uint64_t seed = 0;
    std::string out = "-";
};

int run_gen(const GenOpts& o) {
    OutStream os(o.out);
    Rng rng(o.seed);
    if (o.poly) {
        if (o.d < 1 || o.d > 16) throw std::invalid_argument("need field degree 1..16");
        if (o.n < 0) throw std::invalid_argument("coefficient degree bound must be >= 0");
        io::PolyFile f;
        f.d = o.d;
        f.n = o.n;
        uint64_t field = uint64_t(1) << o.d;
        for (int i = 0; i <= o.n; i++) f.updates.push_back({i, uint32_t(rng.below(field))});
        f.queries.push_back(uint32_t(rng.below(field)));
        io::emit_poly(os.get(), f);
        return 0;
    }
    parity::Instance inst{o.ell, o.B};
    parity::HardSample hs = parity::sample_hard_distribution(inst, rng);
    io::ParityFile f;
    f.inst = inst;
    for (const auto& epoch : hs.epochs)
        for (const parity::Update& u : epoch) f.updates.push_back(u);
    f.queries.push_back(hs.query);
    io::emit_parity(os.get(), f);
    return 0;
}

// ---------------------------------------------------------------------------
// xcheck
// ---------------------------------------------------------------------------

struct XcheckOpts {
    std::string in;
    int batch = 0;
    int ell = 2, B = 2;
    int64_t trials = 100;  // queries per generated instance in batch mode
    uint64_t seed = 0;
    std::string solvers = "reference,rectparity,rangeparity,rangeselect";
    std::string out = "-";
};

// Runs the named solvers over one update/query stream. Returns the index of
// the first diverging query, or -1; fills `answers` with the last round.
int64_t first_divergence(std::vector<std::unique_ptr<reductions::ParitySolver>>& solvers,
                         const std::vector<parity::Query>& queries, std::vector<int>& answers) {
    for (size_t qi = 0; qi < queries.size(); qi++) {
        answers.clear();
        for (auto& s : solvers) answers.push_back(s->answer(queries[qi]));
        for (int a : answers)
            if (a != answers[0]) return int64_t(qi);
    }
    return -1;
}

int run_xcheck(const XcheckOpts& o) {
    std::vector<std::string> names = split_csv(o.solvers);
    if (names.empty()) throw std::invalid_argument("need at least one solver");

    if (!o.in.empty()) {
        io::ParityFile f = io::parse_parity_file(o.in);
        std::vector<std::unique_ptr<reductions::ParitySolver>> solvers;
        for (const std::string& n : names) solvers.push_back(solver_by_name(n, f.inst));
        reductions::RangeSelectDriver* rsel = nullptr;
        for (auto& s : solvers)
            if (s->name() == "rangeselect")
                rsel = static_cast<reductions::RangeSelectDriver*>(s.get());
        if (rsel && o.out != "-") rsel->enable_trace(true);

        for (const parity::Update& u : f.updates)
            for (auto& s : solvers) s->apply_update(u);

        if (solvers.size() == 1) {  // nothing to compare: emit the answer bits
            OutStream os(o.out);
            for (const parity::Query& q : f.queries) os.get() << solvers[0]->answer(q) << "\n";
            return 0;
        }
        std::vector<int> answers;
        int64_t bad = first_divergence(solvers, f.queries, answers);
        if (bad >= 0) {
            std::cout << "FAIL query=" << bad << " s=" << f.queries[size_t(bad)].s
                      << " t=" << f.queries[size_t(bad)].t;
            for (size_t si = 0; si < solvers.size(); si++)
                std::cout << " " << solvers[si]->name() << "=" << answers[si];
            std::cout << "\n";
            return 1;
        }
        if (rsel && o.out != "-") {
            OutStream os(o.out);
            os.get() << "query,j,h,k,r,returned\n";
            for (const auto& row : rsel->trace())
                os.get() << row.query_index << ',' << row.j << ',' << row.h << ',' << row.k
                         << ',' << row.r << ',' << row.returned << "\n";
        }
        std::cout << "PASS queries=" << f.queries.size() << " solvers=" << o.solvers << "\n";
        return 0;
    }

    if (o.batch < 1) throw std::invalid_argument("need --in FILE or --batch N");
    parity::Instance inst{o.ell, o.B};
    for (int b = 0; b < o.batch; b++) {
        Rng rng(mix64(o.seed, uint64_t(b)));
        parity::HardSample hs = parity::sample_hard_distribution(inst, rng);
        std::vector<std::unique_ptr<reductions::ParitySolver>> solvers;
        for (const std::string& n : names) solvers.push_back(solver_by_name(n, inst));
        for (const auto& epoch : hs.epochs)
            for (const parity::Update& u : epoch)
                for (auto& s : solvers) s->apply_update(u);
        std::vector<parity::Query> queries{hs.query};
        for (int64_t t = 1; t < o.trials; t++)
            queries.push_back({int64_t(rng.below(uint64_t(inst.side()))),
                               int64_t(rng.below(uint64_t(inst.side())))});
        std::vector<int> answers;
        int64_t bad = first_divergence(solvers, queries, answers);
        if (bad >= 0) {
            std::cout << "FAIL instance=" << b << " query=" << bad
                      << " s=" << queries[size_t(bad)].s << " t=" << queries[size_t(bad)].t;
            for (size_t si = 0; si < solvers.size(); si++)
                std::cout << " " << solvers[si]->name() << "=" << answers[si];
            std::cout << "\n";
            return 1;
        }
    }
    std::cout << "PASS instances=" << o.batch << " queries_each=" << o.trials
              << " solvers=" << o.solvers << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// pta
// ---------------------------------------------------------------------------

struct PtaOpts {
    bool cheb = false, find = false, tight = false;
    int k = 4, r = 1;
    std::string M = "2";
    double eps = 0.1;
    uint64_t seed = 0;
    std::string out = "-";
};

int run_pta(const PtaOpts& o) {
    int modes = int(o.cheb) + int(o.find) + int(o.tight);
    if (modes != 1) throw std::invalid_argument("pick exactly one of --cheb, --find, --tight");
    OutStream os(o.out);
    os.get() << "k,M_or_r,D,eps_cert,coeff_sum,Y,mass\n";

    if (o.cheb) {
        mpq_class M(o.M);
        M.canonicalize();
        pta::SymmetricPoly P = pta::chebyshev_symmetric(o.k, M);
        mpq_class eps_cert = 2 / M;
        os.get() << o.k << ',' << M << ',' << P.degree << ',' << eps_cert << ','
                 << P.coeff_sum << ",,\n";
        return 0;
    }
    if (o.find) {
        Rng rng(o.seed);
        pta::SignedTable h = pta::planted_unit_table(o.k, o.eps, rng);
        pta::PeakCert cert = pta::find_peak_subset(h, o.eps);
        mpq_class coeff_sum = 1 / cert.bound;
        os.get() << o.k << ',' << 2.0 / o.eps << ',' << cert.degree << ',' << o.eps << ','
                 << coeff_sum << ',';
        for (size_t j = 0; j < cert.Y.size(); j++) os.get() << (j ? " " : "") << cert.Y[j];
        os.get() << ',' << cert.mass << "\n";
        return 0;
    }
    pta::CounterexampleCert cert = pta::tight_counterexample(o.k, o.r);
    os.get() << o.k << ',' << o.r << ',' << o.r << ',' << cert.epsilon_cert << ','
             << cert.normalizer << ",," << pta::linf_peak(cert.f) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimOpts {
    std::string toy = "prefix";
    int ell = 2, B = 2, w = 8;
    int epoch = 0;  // 0 = toy default
    int64_t tu = 1;
    double p = 0.5, a = 0.0;
    int64_t trials = 1000;
    uint64_t seed = 0;
    int64_t guard = int64_t(1) << 20;
    std::string out = "-";
};

int run_simulate(const SimOpts& o) {
    std::unique_ptr<cellprobe::ToyProblem> toy;
    int default_epoch;
    if (o.toy == "prefix") {
        if (o.w != 8) throw std::invalid_argument("the prefix toy has fixed 8-bit words");
        toy = std::make_unique<cellprobe::PrefixParityToy>(8);  // queries straddle epoch 2
        default_epoch = 2;
    } else if (o.toy == "butterfly") {
        toy = std::make_unique<cellprobe::ButterflyParityToy>(o.ell, o.B, o.w);
        default_epoch = 1;
    } else {
        throw std::invalid_argument("unknown toy '" + o.toy + "' (prefix or butterfly)");
    }
    if (o.tu != toy->update_budget())
        throw std::invalid_argument("--tu must match the toy's per-update write budget");

    cellprobe::ProtocolConfig cfg;
    cfg.epoch = o.epoch == 0 ? default_epoch : o.epoch;
    cfg.p = o.p;
    cfg.a = o.a;
    cfg.seed = o.seed;
    cfg.posterior_guard = o.guard;
    cellprobe::AdvantageReport rep = cellprobe::estimate_advantage(*toy, cfg, o.trials);
    OutStream os(o.out);
    cellprobe::write_report_csv(os.get(), rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parity-search laboratory: instances, reductions, certificates, protocol"};
    app.require_subcommand(1);

    GenOpts g;
    CLI::App* gen = app.add_subcommand("gen", "emit a hard-distribution instance file");
    gen->add_option("--ell", g.ell, "number of graphs / epochs");
    gen->add_option("--B", g.B, "graph degree");
    gen->add_flag("--poly", g.poly, "emit a polynomial-evaluation instance instead");
    gen->add_option("--d", g.d, "field extension degree (poly mode)");
    gen->add_option("--n", g.n, "coefficient degree bound (poly mode)");
    gen->add_option("--seed", g.seed, "random seed");
    gen->add_option("--out", g.out, "output path, - for stdout");

    XcheckOpts x;
    CLI::App* xc = app.add_subcommand("xcheck", "cross-check solver drivers on instances");
    xc->add_option("--in", x.in, "instance file to check");
    xc->add_option("--batch", x.batch, "generate and check this many instances");
    xc->add_option("--ell", x.ell, "number of graphs (batch mode)");
    xc->add_option("--B", x.B, "graph degree (batch mode)");
    xc->add_option("--trials", x.trials, "queries per instance (batch mode)");
    xc->add_option("--seed", x.seed, "random seed (batch mode)");
    xc->add_option("--solvers", x.solvers, "comma list: reference,rectparity,rangeparity,rangeselect");
    xc->add_option("--out", x.out, "selection trace CSV path (file mode)");

    PtaOpts t;
    CLI::App* pt = app.add_subcommand("pta", "polynomial and peak-to-average certificates");
    pt->add_flag("--cheb", t.cheb, "symmetric polynomial properties for (k, M)");
    pt->add_flag("--find", t.find, "peak-subset certificate on a seeded random table");
    pt->add_flag("--tight", t.tight, "tightness counterexample for (k, r)");
    pt->add_option("--k", t.k, "arity");
    pt->add_option("--M", t.M, "peak target, integer or rational like 5/2");
    pt->add_option("--r", t.r, "vanishing-difference order");
    pt->add_option("--eps", t.eps, "planted peak height");
    pt->add_option("--seed", t.seed, "random seed");
    pt->add_option("--out", t.out, "output path, - for stdout");

    SimOpts s;
    CLI::App* sim = app.add_subcommand("simulate", "run the one-way protocol on a toy problem");
    sim->add_option("--toy", s.toy, "prefix or butterfly");
    sim->add_option("--ell", s.ell, "graphs in the butterfly toy");
    sim->add_option("--B", s.B, "degree of the butterfly toy");
    sim->add_option("--w", s.w, "word bits of the butterfly toy");
    sim->add_option("--epoch", s.epoch, "hidden epoch (0 = toy default)");
    sim->add_option("--tu", s.tu, "per-update write budget (must match the toy)");
    sim->add_option("--p", s.p, "cell sampling probability");
    sim->add_option("--a", s.a, "exponent: p = 1/(w t_u)^a when positive");
    sim->add_option("--trials", s.trials, "Monte Carlo trials");
    sim->add_option("--seed", s.seed, "master seed");
    sim->add_option("--guard", s.guard, "posterior enumeration guard");
    sim->add_option("--out", s.out, "report CSV path, - for stdout");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*gen) return run_gen(g);
        if (*xc) return run_xcheck(x);
        if (*pt) return run_pta(t);
        return run_simulate(s);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
