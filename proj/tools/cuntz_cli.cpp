// cuntz: command-line front end for the library.
//
// Exit status: 0 ok / verdict true, 1 verdict false, 2 invalid input or configuration,
// 3 unknown (budget or bound reached), 4 internal invariant breach.

#include <cuntz/cuntz.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <variant>

using json = nlohmann::json;
using namespace cuntz;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { ok = 0, verdict_false = 1, invalid = 2, unknown = 3, breach = 4 };

int exit_of(Truth t) { return t == Truth::yes ? ok : t == Truth::no ? verdict_false : unknown; }

struct Common {
    std::string ring, ring_file, out = "json", manifest_path;
    std::size_t kmax = 2;
    std::uint64_t budget = default_budget;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

/// What a verb hands back for printing.
struct Report {
    std::string verb;
    json manifest = json::object();
    json result = json::object();
    std::string text;
    std::optional<std::string> dot;
    int code = ok;
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RingPtr load_ring(const Common& c, const char* fallback = nullptr) {
    std::string text;
    if (!c.ring_file.empty()) text = read_file(c.ring_file);
    else if (!c.ring.empty()) text = c.ring;
    else if (fallback) text = fallback;
    else throw InvalidInput("this verb needs --ring or --ring-file");
    return FiniteRing::make(RingSpec::parse(text));
}

void note_ring(Report& r, const FiniteRing& R) {
    r.manifest["ring"] = R.spec().to_string();
    r.manifest["ring_digest"] = "fnv1a64:" + hex64(fnv1a(R.spec().to_keyvalue()));
    r.manifest["ring_order"] = R.size();
}

Mat parse_mat(const FiniteRing& R, const std::string& text, const char* what) {
    if (text.empty()) throw InvalidInput(std::string("missing matrix for ") + what);
    return Mat::parse(R, text);
}

json mats(const std::vector<Mat>& v) {
    json a = json::array();
    for (auto& m : v) a.push_back(m.str());
    return a;
}

json pom_json(const FinitePoM& P) {
    json j;
    j["labels"] = P.labels;
    j["zero"] = P.zero;
    json covers = json::array();
    for (auto [a, b] : P.hasse()) covers.push_back({a, b});
    j["covers"] = covers;
    json leq = json::array();
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = 0; b < P.size(); ++b)
            if (P.le(a, b)) leq.push_back({a, b});
    j["leq"] = leq;
    if (P.has_add()) {
        json add = json::array();
        for (auto& row : P.add) {
            json r = json::array();
            for (auto& x : row) r.push_back(x ? json(*x) : json(nullptr));
            add.push_back(r);
        }
        j["add"] = add;
    }
    return j;
}

json certs_json(const std::vector<std::vector<Cert>>& c) {
    json a = json::array();
    for (auto& row : c) {
        json r = json::array();
        for (auto x : row) r.push_back(to_string(x));
        a.push_back(r);
    }
    return a;
}

/// Worst certificate in a table, in the order exact < truncation < stage < bound < sampled.
Cert worst(const std::vector<std::vector<Cert>>& c, Cert start = Cert::exact) {
    for (auto& row : c)
        for (auto x : row) start = std::max(start, x);
    return start;
}

std::string pom_text(const FinitePoM& P) {
    std::ostringstream os;
    os << P.size() << " elements:";
    for (auto& l : P.labels) os << " " << l;
    os << "\ncovers:";
    for (auto [a, b] : P.hasse()) os << " " << P.labels[a] << "<" << P.labels[b];
    os << "\n";
    return os.str();
}

// --- monoids -----------------------------------------------------------------

using AnyMonoid = std::variant<SymbolicMonoid, FinitePoM>;

std::size_t arg_of(const std::string& s, const std::string& head) {
    if (s.size() < head.size() + 2 || s.compare(0, head.size() + 1, head + "(") != 0 || s.back() != ')')
        throw InvalidInput("bad monoid name " + s);
    return detail::parse_uint(s.substr(head.size() + 1, s.size() - head.size() - 2));
}

FinitePoM pom_from_json(const json& j) {
    FinitePoM P;
    P.labels = j.at("labels").get<std::vector<std::string>>();
    const std::size_t n = P.size();
    if (n == 0) throw InvalidInput("monoid file: no labels");
    P.zero = j.value("zero", std::size_t{0});
    if (P.zero >= n) throw InvalidInput("monoid file: zero out of range");
    P.leq.assign(n, std::vector<char>(n, 0));
    for (auto& e : j.at("leq")) {
        auto a = e.at(0).get<std::size_t>(), b = e.at(1).get<std::size_t>();
        if (a >= n || b >= n) throw InvalidInput("monoid file: leq index out of range");
        P.leq[a][b] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) P.leq[i][i] = 1;
    P.add.assign(n, std::vector<std::optional<std::size_t>>(n));
    const auto& add = j.at("add");
    if (add.size() != n) throw InvalidInput("monoid file: add table must be n x n");
    for (std::size_t a = 0; a < n; ++a) {
        if (add[a].size() != n) throw InvalidInput("monoid file: add table must be n x n");
        for (std::size_t b = 0; b < n; ++b)
            if (!add[a][b].is_null()) {
                auto s = add[a][b].get<std::size_t>();
                if (s >= n) throw InvalidInput("monoid file: sum out of range");
                P.add[a][b] = s;
            }
    }
    if (auto bad = P.order_violation()) throw InvalidInput("monoid file: " + *bad);
    return P;
}

AnyMonoid parse_monoid(const std::string& name, const std::string& file) {
    if (!file.empty()) {
        try {
            return pom_from_json(json::parse(read_file(file)));
        } catch (const json::exception& e) {
            throw InvalidInput("monoid file " + file + ": " + e.what());
        }
    }
    if (name.empty()) throw InvalidInput("this verb needs --monoid, --monoid-file, or --ring");
    auto rank_after = [&](std::size_t pos) -> std::size_t {
        if (pos == name.size()) return 1;
        if (name[pos] != '^') throw InvalidInput("bad monoid name " + name);
        std::size_t r = detail::parse_uint(name.substr(pos + 1));
        if (r == 0 || r > 4) throw InvalidInput("rank must be in 1..4");
        return r;
    };
    if (name == "nsd") return SymbolicMonoid::nsd();
    if (name.rfind("Nbar", 0) == 0) return SymbolicMonoid::natbar(rank_after(4));
    if (name.rfind("N", 0) == 0) return SymbolicMonoid::nat(rank_after(1));
    auto sized = [&](const char* head, std::size_t lo, std::size_t hi) {
        std::size_t v = arg_of(name, head);
        if (v < lo || v > hi) throw InvalidInput(std::string(head) + " size out of range");
        return v;
    };
    if (name.rfind("saturating(", 0) == 0) return saturating_chain(sized("saturating", 1, 64));
    if (name.rfind("max_chain(", 0) == 0) return max_chain(sized("max_chain", 1, 64));
    if (name.rfind("boolean(", 0) == 0) return boolean_lattice(sized("boolean", 0, 6));
    if (name.rfind("truncated_chain(", 0) == 0) return truncated_chain(sized("truncated_chain", 0, 64));
    throw InvalidInput("unknown monoid " + name + " (try N, N^2, Nbar, nsd, saturating(4), max_chain(3), boolean(2))");
}

Pt parse_point(const std::string& text) {
    Pt p;
    std::string t;
    for (char ch : text)
        if (ch != '(' && ch != ')' && ch != ' ') t += ch;
    std::size_t i = 0;
    while (i <= t.size()) {
        auto j = t.find(',', i);
        if (j == std::string::npos) j = t.size();
        std::string tok = t.substr(i, j - i);
        if (tok == "inf") p.push_back(INF);
        else p.push_back(detail::parse_uint(tok));
        i = j + 1;
    }
    return p;
}

json pts_json(const std::vector<Pt>& v) {
    json a = json::array();
    for (auto& p : v) a.push_back(pt_str(p));
    return a;
}

// --- sequences ---------------------------------------------------------------

struct SeqArgs {
    std::vector<std::string> x, y;
    std::string tail = "stabilized", tail_witness, file;
};

Tail parse_tail(const std::string& s) {
    if (s == "stabilized") return Tail::stabilized;
    if (s == "open") return Tail::open;
    throw InvalidInput("tail must be stabilized or open");
}

SeqElem seq_from_json(const FiniteRing& R, const json& j) {
    SeqElem s;
    s.ring = &R;
    for (auto& m : j.at("x")) s.x.push_back(Mat::parse(R, m.get<std::string>()));
    if (j.contains("y"))
        for (auto& m : j.at("y")) s.y.push_back(Mat::parse(R, m.get<std::string>()));
    s.tail = parse_tail(j.value("tail", std::string("stabilized")));
    if (j.contains("tail_witness") && !j.at("tail_witness").is_null())
        s.tail_witness = Mat::parse(R, j.at("tail_witness").get<std::string>());
    return s;
}

SeqElem load_seq(const FiniteRing& R, const SeqArgs& a) {
    if (!a.file.empty()) {
        try {
            return seq_from_json(R, json::parse(read_file(a.file)));
        } catch (const json::exception& e) {
            throw InvalidInput("sequence file " + a.file + ": " + e.what());
        }
    }
    if (a.x.empty()) throw InvalidInput("a sequence needs --x (repeat per stage) or --seq FILE");
    SeqElem s;
    s.ring = &R;
    for (auto& m : a.x) s.x.push_back(Mat::parse(R, m));
    for (auto& m : a.y) s.y.push_back(Mat::parse(R, m));
    s.tail = parse_tail(a.tail);
    if (!a.tail_witness.empty()) s.tail_witness = Mat::parse(R, a.tail_witness);
    return s;
}

json seq_json(const SeqElem& s) {
    json j;
    j["x"] = mats(s.x);
    j["y"] = mats(s.y);
    j["tail"] = to_string(s.tail);
    j["tail_witness"] = s.tail_witness ? json(s.tail_witness->str()) : json(nullptr);
    return j;
}

// --- verbs -------------------------------------------------------------------

struct PrecsimArgs {
    std::string a, b, relation = "one";
    std::size_t depth = 1, size_cap = 2;
    bool no_fast_path = false;
};

Report run_precsim(const Common& c, const PrecsimArgs& p) {
    Report r{"precsim"};
    auto R = load_ring(c);
    note_ring(r, *R);
    Mat a = parse_mat(*R, p.a, "--a"), b = parse_mat(*R, p.b, "--b");
    Sub1Options so;
    so.budget = c.budget;
    so.fast_path = !p.no_fast_path;
    r.manifest["bounds"] = {{"budget", c.budget}};
    r.result["a"] = a.str();
    r.result["b"] = b.str();
    r.result["relation"] = p.relation;
    Truth v;
    Cert cert;
    if (p.relation == "one") {
        auto res = precsim1(a, b, so);
        v = res.verdict;
        cert = v == Truth::unknown ? Cert::bound_relative : Cert::exact;
        r.result["used_fast_path"] = res.used_fast_path;
        r.result["work"] = res.work;
        if (res.witness) {
            r.result["witness"] = {{"r", res.witness->r.str()}, {"t", res.witness->t.str()}};
            r.text = "witness: a = r b t with r = " + res.witness->r.str() + ", t = " + res.witness->t.str() + "\n";
        }
    } else if (p.relation == "malcolmson") {
        MalcolmsonOptions mo{p.depth, p.size_cap, so};
        r.manifest["bounds"]["depth"] = p.depth;
        r.manifest["bounds"]["size_cap"] = p.size_cap;
        auto res = precsimM(a, b, mo);
        v = res.verdict;
        cert = res.cert;
        r.result["chain"] = mats(res.chain);
        r.result["explored"] = res.explored;
        if (!res.chain.empty()) {
            r.text = "chain:";
            for (auto& m : res.chain) r.text += " " + m.str();
            r.text += "\n";
        }
    } else {
        throw InvalidInput("--relation must be one or malcolmson");
    }
    r.result["verdict"] = to_string(v);
    r.result["cert"] = to_string(cert);
    r.manifest["certificates"] = {{"verdict", to_string(cert)}};
    r.text = std::string(to_string(v)) + " (" + to_string(cert) + ")\n" + r.text;
    // a "no" that only holds up to the search bound is not a verdict
    r.code = v == Truth::no && cert != Cert::exact ? unknown : exit_of(v);
    return r;
}

WOptions w_options(const Common& c) {
    WOptions o;
    o.budget = c.budget;
    o.jobs = c.jobs;
    return o;
}

Report run_compute_w(const Common& c) {
    Report r{"compute-w"};
    auto R = load_ring(c);
    note_ring(r, *R);
    auto W = build_W(*R, c.kmax, w_options(c));
    r.manifest["bounds"] = {{"kmax", c.kmax}, {"budget", c.budget}};
    const Cert cw = worst(W.add_cert, Cert::truncation_relative);
    r.manifest["certificates"] = {{"order", "exact"}, {"addition", to_string(cw)}};
    json classes = json::array();
    for (std::size_t i = 0; i < W.size(); ++i)
        classes.push_back({{"label", W.pom.labels[i]},
                           {"rep", W.reps[i].str()},
                           {"members", W.members[i]},
                           {"invariant", {W.inv[i].first, W.inv[i].second}}});
    r.result["classes"] = classes;
    r.result["monoid"] = pom_json(W.pom);
    r.result["add_cert"] = certs_json(W.add_cert);
    r.result["enumerated"] = W.enumerated;
    r.result["comparisons"] = W.comparisons;
    r.text = "W(" + R->name() + ") up to " + std::to_string(c.kmax) + "x" + std::to_string(c.kmax) + ": " + pom_text(W.pom);
    r.dot = W.to_dot();
    return r;
}

Report run_compute_v(const Common& c) {
    Report r{"compute-v"};
    auto R = load_ring(c);
    note_ring(r, *R);
    auto W = build_W(*R, c.kmax, w_options(c));
    auto V = build_V(W, w_options(c));
    auto io = iota_report(V, W);
    r.manifest["bounds"] = {{"kmax", c.kmax}, {"budget", c.budget}};
    r.manifest["certificates"] = {{"addition", to_string(worst(V.add_cert, Cert::truncation_relative))}};
    json classes = json::array();
    for (std::size_t i = 0; i < V.size(); ++i)
        classes.push_back({{"label", V.pom.labels[i]}, {"rep", V.reps[i].str()}, {"iota", V.iota[i]}});
    r.result["classes"] = classes;
    r.result["monoid"] = pom_json(V.pom);
    r.result["add_cert"] = certs_json(V.add_cert);
    r.result["idempotents"] = V.idempotents;
    r.result["iota"] = {{"injective", io.injective}, {"surjective", io.surjective}, {"order_iso", io.order_iso}, {"missed", io.missed}};
    r.text = "V(" + R->name() + "): " + pom_text(V.pom) + "iota injective=" + (io.injective ? "yes" : "no") +
             " surjective=" + (io.surjective ? "yes" : "no") + " order_iso=" + (io.order_iso ? "yes" : "no") + "\n";
    r.dot = V.pom.to_dot("V(" + R->name() + ")");
    return r;
}

struct MonoidArgs {
    std::string monoid, monoid_file;
};

json finite_lambda_json(const FiniteLambda& L, const FinitePoM& base) {
    json j;
    j["monoid"] = pom_json(L.pom);
    json sets = json::array();
    for (auto& s : L.sets) {
        json m = json::array();
        for (std::size_t x = 0; x < s.size(); ++x)
            if (s[x]) m.push_back(base.labels[x]);
        sets.push_back(m);
    }
    j["intervals"] = sets;
    j["embed"] = L.embed;
    return j;
}

Report run_compute_lambda(const Common& c, const MonoidArgs& m) {
    Report r{"compute-lambda"};
    if (m.monoid.empty() && m.monoid_file.empty()) {
        auto R = load_ring(c);
        note_ring(r, *R);
        auto W = build_W(*R, c.kmax, w_options(c));
        auto L = lambda_of_ring(W);
        r.manifest["bounds"] = {{"kmax", c.kmax}, {"budget", c.budget}};
        r.manifest["certificates"] = {{"lambda", to_string(L.cert)}};
        r.result["recognized"] = L.recognized;
        r.result["description"] = L.description;
        r.result["cert"] = to_string(L.cert);
        if (L.recognized) {
            r.result["model"] = L.model.name();
            r.result["coords"] = pts_json(L.coords);
        } else {
            r.result["finite"] = finite_lambda_json(L.finite, W.pom);
            r.dot = L.finite.pom.to_dot("Lambda(" + R->name() + ")");
        }
        r.text = L.description + "\n";
        return r;
    }
    auto M = parse_monoid(m.monoid, m.monoid_file);
    if (auto* s = std::get_if<SymbolicMonoid>(&M)) {
        if (s->kind != SymKind::nat) throw InvalidInput("compute-lambda handles N^r symbolically; give a finite monoid otherwise");
        auto iso = certify_lambda_nat_is_natbar(s->rank);
        r.manifest["monoid"] = s->name();
        r.manifest["certificates"] = {{"lambda", "bound_relative"}};
        r.result["model"] = SymbolicMonoid::natbar(s->rank).name();
        r.result["iso"] = {{"order", iso.order}, {"addition", iso.addition}, {"way_below", iso.way_below},
                           {"suprema", iso.suprema}, {"checked", iso.checked}, {"counterexample", iso.counterexample}};
        r.text = "Lambda(" + s->name() + ") = " + SymbolicMonoid::natbar(s->rank).name() + (iso.ok() ? "" : " FAILED: " + iso.counterexample) + "\n";
        if (!iso.ok()) r.code = breach;
        return r;
    }
    auto& P = std::get<FinitePoM>(M);
    auto L = lambda_sigma(P);
    r.manifest["monoid"] = m.monoid.empty() ? m.monoid_file : m.monoid;
    r.manifest["certificates"] = {{"lambda", "exact"}};
    r.result["finite"] = finite_lambda_json(L, P);
    r.text = std::to_string(L.pom.size()) + " intervals\n" + pom_text(L.pom);
    r.dot = L.pom.to_dot("Lambda");
    return r;
}

/// Finite or symbolic monoid named on the command line, or Lambda of W for --ring.
struct CuTarget {
    std::optional<SymbolicMonoid> sym;
    std::optional<FinitePoM> fin;
    std::string name;
};

CuTarget cu_target(const Common& c, const MonoidArgs& m, Report& r) {
    CuTarget t;
    if (m.monoid.empty() && m.monoid_file.empty()) {
        auto R = load_ring(c);
        note_ring(r, *R);
        auto W = build_W(*R, c.kmax, w_options(c));
        auto L = lambda_of_ring(W);
        r.manifest["bounds"] = {{"kmax", c.kmax}, {"budget", c.budget}};
        r.manifest["certificates"] = {{"lambda", to_string(L.cert)}};
        if (L.recognized && L.model.rank > 0) t.sym = L.model;
        else t.fin = L.recognized ? W.pom : L.finite.pom;
        t.name = "Lambda(" + R->name() + ")";
        return t;
    }
    auto M = parse_monoid(m.monoid, m.monoid_file);
    if (auto* s = std::get_if<SymbolicMonoid>(&M)) t.sym = *s;
    else t.fin = std::get<FinitePoM>(M);
    t.name = m.monoid.empty() ? m.monoid_file : m.monoid;
    r.manifest["monoid"] = t.name;
    return t;
}

Report run_check_cu(const Common& c, const MonoidArgs& m) {
    Report r{"check-cu"};
    auto t = cu_target(c, m, r);
    const bool from_ring = m.monoid.empty() && m.monoid_file.empty();
    if (from_ring && t.fin && !t.fin->add_total())
        throw BoundExceeded("addition on the truncation is partial; raise --kmax or pass a finite monoid");
    CuReport rep = t.sym ? check_cu_axioms(*t.sym) : check_cu_axioms(*t.fin);
    json axioms = json::array();
    Truth all = Truth::yes;
    std::ostringstream os;
    for (auto& a : rep.axioms) {
        axioms.push_back({{"axiom", a.axiom}, {"verdict", to_string(a.verdict)}, {"cert", to_string(a.cert)},
                          {"counterexample", a.counterexample}});
        if (a.verdict == Truth::no) all = Truth::no;
        else if (a.verdict == Truth::unknown && all == Truth::yes) all = Truth::unknown;
        os << a.axiom << ": " << to_string(a.verdict) << " (" << to_string(a.cert) << ")";
        if (!a.counterexample.empty()) os << "  " << a.counterexample;
        os << "\n";
    }
    r.result["monoid"] = rep.monoid;
    r.result["range"] = rep.range;
    r.result["axioms"] = axioms;
    r.result["verdict"] = to_string(all);
    r.manifest["certificates"]["axioms"] = t.sym ? "bound_relative" : "exact";
    r.text = t.name + " (" + rep.range + ")\n" + os.str();
    r.code = exit_of(all);
    return r;
}

Report run_compacts(const Common& c, const MonoidArgs& m) {
    Report r{"compacts"};
    auto t = cu_target(c, m, r);
    if (t.sym) {
        SymbolicCuModel model{*t.sym};
        auto pts = compacts(model);
        r.result["description"] = compacts_description(*t.sym);
        r.result["range"] = model.range();
        r.result["compacts"] = pts_json(pts);
        r.text = compacts_description(*t.sym) + "\n";
    } else {
        json a = json::array();
        for (auto x : compacts(*t.fin)) a.push_back(t.fin->labels[x]);
        r.result["compacts"] = a;
        r.text = "compacts: " + a.dump() + "\n";
    }
    return r;
}

struct StatesArgs {
    std::string unit, variant = "dimension";
    std::uint64_t grid = 3;
    std::size_t max_variables = 12;
};

json rat(const Rational& q) { return q.str(); }

Report run_states(const Common& c, const MonoidArgs& m, const StatesArgs& s) {
    Report r{"states"};
    if (s.unit.empty()) throw InvalidInput("states needs --unit");
    VertexOptions vo;
    vo.max_variables = s.max_variables;
    StatePolytope P;
    if (m.monoid.empty() && m.monoid_file.empty()) {
        auto R = load_ring(c);
        note_ring(r, *R);
        auto W = build_W(*R, c.kmax, w_options(c));
        auto u = W.classify(parse_mat(*R, s.unit, "--unit"));
        if (!u) throw InvalidInput("unit is outside the truncation");
        StateVariant var;
        if (s.variant == "dimension") var = StateVariant::dimension;
        else if (s.variant == "sylvester") var = StateVariant::sylvester;
        else throw InvalidInput("--variant must be dimension or sylvester");
        SylvesterOptions so;
        so.seed = c.seed ? c.seed : 1;
        so.jobs = c.jobs;
        P = state_polytope(W, *u, var, so, vo);
        r.manifest["bounds"] = {{"kmax", c.kmax}, {"budget", c.budget}};
        r.result["variant"] = s.variant;
    } else {
        auto M = parse_monoid(m.monoid, m.monoid_file);
        r.manifest["monoid"] = m.monoid.empty() ? m.monoid_file : m.monoid;
        if (auto* sym = std::get_if<SymbolicMonoid>(&M)) {
            P = state_polytope(*sym, parse_point(s.unit), s.grid, vo);
            r.manifest["bounds"] = {{"grid", s.grid}};
        } else {
            auto& F = std::get<FinitePoM>(M);
            auto u = F.find(s.unit);
            if (!u) throw InvalidInput("no element labelled " + s.unit);
            P = state_polytope(F, *u, vo);
        }
    }
    r.manifest["certificates"] = {{"polytope", to_string(P.cert)}};
    r.result["variables"] = P.variables;
    r.result["unit"] = P.unit;
    r.result["fragment"] = P.fragment;
    r.result["cert"] = to_string(P.cert);
    r.result["empty"] = P.empty;
    if (P.empty) r.result["empty_reason"] = P.empty_reason;
    r.result["vertices_enumerated"] = P.vertices_enumerated;
    json cons = json::array();
    for (auto& k : P.constraints) {
        json coef = json::array();
        for (auto& q : k.coef) coef.push_back(rat(q));
        cons.push_back({{"coef", coef}, {"kind", k.kind == LinearConstraint::Kind::eq ? "eq" : "ge"}, {"rhs", rat(k.rhs)}, {"origin", k.origin}});
    }
    r.result["constraints"] = cons;
    json verts = json::array();
    std::ostringstream os;
    os << "unit " << P.unit << ", " << P.vertices.size() << " extreme states";
    if (P.empty) os << " (empty: " << P.empty_reason << ")";
    os << "\n";
    for (auto& v : P.vertices) {
        json row = json::array();
        os << " ";
        for (std::size_t i = 0; i < v.size(); ++i) {
            row.push_back(rat(v[i]));
            os << " " << P.variables[i] << "=" << v[i].str();
        }
        os << "\n";
        verts.push_back(row);
    }
    r.result["vertices"] = verts;
    r.text = os.str();
    return r;
}

Report run_seq_validate(const Common& c, const SeqArgs& a) {
    Report r{"seq-validate"};
    auto R = load_ring(c);
    note_ring(r, *R);
    auto s = load_seq(*R, a);
    auto chk = validate_seq(s);
    r.result["sequence"] = seq_json(s);
    r.result["valid"] = chk.valid();
    r.result["violations"] = chk.violations;
    r.text = chk.valid() ? "valid\n" : "invalid\n";
    for (auto& v : chk.violations) r.text += "  " + v + "\n";
    r.code = chk.valid() ? ok : verdict_false;
    return r;
}

Report run_seq_to_idem(const Common& c, const SeqArgs& a, std::size_t extra) {
    Report r{"seq-to-idem"};
    auto R = load_ring(c);
    note_ring(r, *R);
    auto s = load_seq(*R, a);
    auto ci = seq_to_idem(s, extra);
    r.manifest["bounds"] = {{"extra", extra}};
    r.result["blocks"] = ci.blocks;
    r.result["E"] = ci.E ? json(ci.E->str()) : json(nullptr);
    r.result["Z"] = mats(ci.Z);
    r.result["finite"] = ci.finite ? json(ci.finite->str()) : json(nullptr);
    auto bad = ci.corner_violation();
    r.result["corner_violation"] = bad ? json(*bad) : json(nullptr);
    r.text = std::string("E = ") + (ci.E ? ci.E->str() : "(none)") + "\n";
    if (bad) {
        r.text += "corner check failed: " + *bad + "\n";
        r.code = breach;
    }
    return r;
}

Report run_idem_to_seq(const Common& c, const std::string& e) {
    Report r{"idem-to-seq"};
    auto R = load_ring(c);
    note_ring(r, *R);
    auto s = idem_to_seq(parse_mat(*R, e, "--e"));
    r.result["sequence"] = seq_json(s);
    r.text = s.str() + "\n";
    return r;
}

Report run_seq_sup(const Common& c, const std::string& chain_file) {
    Report r{"seq-sup"};
    auto R = load_ring(c);
    note_ring(r, *R);
    if (chain_file.empty()) throw InvalidInput("seq-sup needs --chain FILE");
    std::vector<SeqElem> chain;
    try {
        json j = json::parse(read_file(chain_file));
        const json& arr = j.is_object() ? j.at("chain") : j;
        for (auto& e : arr) chain.push_back(seq_from_json(*R, e));
    } catch (const json::exception& e) {
        throw InvalidInput("chain file " + chain_file + ": " + e.what());
    }
    Sub1Options so;
    so.budget = c.budget;
    auto sup = seq_sup(chain, so);
    r.manifest["bounds"] = {{"budget", c.budget}, {"chain_length", chain.size()}};
    r.result["sup"] = seq_json(sup.sup);
    json al = json::array();
    for (auto& w : sup.alignment) al.push_back({{"a", w.r.str()}, {"b", w.t.str()}});
    r.result["alignment"] = al;
    r.result["valid"] = validate_seq(sup.sup).valid();
    r.text = "sup: " + sup.sup.str() + "\n";
    return r;
}

Report run_seq_compact(const Common& c, const SeqArgs& a, std::size_t search_size) {
    Report r{"seq-compact"};
    auto R = load_ring(c);
    note_ring(r, *R);
    auto s = load_seq(*R, a);
    CompactOptions o;
    o.search_size = search_size;
    o.sub1.budget = c.budget;
    auto res = is_compact_seq(s, o);
    r.manifest["bounds"] = {{"budget", c.budget}, {"search_size", search_size}};
    r.manifest["certificates"] = {{"verdict", to_string(res.cert)}};
    r.result["verdict"] = to_string(res.verdict);
    r.result["cert"] = to_string(res.cert);
    r.result["method"] = res.method;
    r.result["z"] = res.z ? json(res.z->str()) : json(nullptr);
    r.result["s"] = res.s ? json(res.s->str()) : json(nullptr);
    r.text = std::string(to_string(res.verdict)) + " (" + to_string(res.cert) + ")";
    if (res.z) r.text += " z = " + res.z->str() + ", s = " + res.s->str();
    r.text += "\n";
    r.code = exit_of(res.verdict);
    return r;
}

Report run_diagonalize(const Common& c, const std::string& a) {
    Report r{"diagonalize"};
    auto R = load_ring(c);
    note_ring(r, *R);
    auto cert = diagonalize(parse_mat(*R, a, "--a"), c.seed);
    auto bad = verify(cert);
    r.manifest["seed"] = c.seed;
    r.manifest["certificates"] = {{"diagonalization", bad ? "failed" : "exact"}};
    json ops = json::array();
    for (auto& o : cert.ops)
        ops.push_back({{"side", o.side == ElemOp::Side::row ? "row" : "col"},
                       {"kind", o.kind == ElemOp::Kind::add ? "add" : "swap"},
                       {"i", o.i}, {"j", o.j}, {"c", o.c}});
    auto rp = psi_rank(cert.D);
    r.result = {{"A", cert.A.str()},     {"D", cert.D.str()},       {"U", cert.U.str()},
                {"V", cert.V.str()},     {"Uinv", cert.Uinv.str()}, {"Vinv", cert.Vinv.str()},
                {"ops", ops},            {"unit_pivots", cert.unit_pivots}, {"nonunit_pivots", cert.nonunit_pivots},
                {"p", cert.p},           {"k", cert.k},             {"valuations", diagonal_valuations(cert.D)},
                {"rank_pair", {rp.r, rp.s}}, {"verified", !bad}};
    r.text = "D = " + cert.D.str() + "\nU = " + cert.U.str() + "\nV = " + cert.V.str() + "\nrank pair " + rp.str() + ", " +
             std::to_string(cert.ops.size()) + " operations\n";
    if (bad) {
        r.result["verify_error"] = *bad;
        r.code = breach;
    }
    return r;
}

// --- shift algebra -------------------------------------------------------------

struct ShiftArgs {
    unsigned d = 3, D = 3;
    std::string word, p, q, side = "left";
    std::size_t size = 1, max_entry_support = ~std::size_t{0};
    unsigned s_degree = 0;
    std::uint64_t max_candidates = std::uint64_t{1} << 24;
    bool no_support_test = false;
};

RingPtr shift_field(const Common& c, Report& r) {
    auto F = load_ring(c, "gf2");
    if (!F->chain_ring() || F->chain_ring()->second != 1) throw InvalidInput("the shift algebra needs a prime field");
    note_ring(r, *F);
    return F;
}

json mono_json(const Monomial& m) {
    return {{"monomial", m.str()}, {"exponents", m.exps()}, {"degree", m.degree()}, {"st", m.empty() ? json(nullptr) : json(m.st())}};
}

Report run_shift_nf(const Common&, const ShiftArgs& s) {
    Report r{"shift nf"};
    auto w = parse_word(s.word);
    auto m = normal_form(w);
    r.result = mono_json(m);
    r.result["word"] = w;
    r.text = m.str() + "\n";
    return r;
}

Report run_shift_mul(const Common& c, const ShiftArgs& s) {
    Report r{"shift mul"};
    auto F = shift_field(c, r);
    ShiftBounds b{s.d, s.D};
    r.manifest["bounds"] = {{"d", s.d}, {"D", s.D}};
    auto x = parse_shift_poly(F, b, s.p), y = parse_shift_poly(F, b, s.q);
    auto z = x * y;
    r.result = {{"p", x.str()}, {"q", y.str()}, {"product", z.str()}};
    r.text = z.str() + "\n";
    return r;
}

Report run_shift_st(const Common& c, const ShiftArgs& s) {
    Report r{"shift st"};
    auto F = shift_field(c, r);
    ShiftBounds b{s.d, s.D};
    r.manifest["bounds"] = {{"d", s.d}, {"D", s.D}};
    auto x = parse_shift_poly(F, b, s.p);
    if (x.is_zero()) throw InvalidInput("st of the zero polynomial is undefined");
    r.result = {{"p", x.str()}, {"st", x.st()}};
    r.text = std::to_string(x.st()) + "\n";
    return r;
}

Report run_shift_search(const Common& c, const ShiftArgs& s) {
    Report r{"shift compact-search"};
    auto F = shift_field(c, r);
    CompactSearchOptions o;
    o.bounds = {s.d, s.D};
    o.size = s.size;
    o.max_entry_support = s.max_entry_support;
    o.s_degree = s.s_degree;
    if (s.side == "left") o.side = ShiftSide::left;
    else if (s.side == "right") o.side = ShiftSide::right;
    else throw InvalidInput("--side must be left or right");
    o.max_candidates = s.max_candidates;
    o.jobs = c.jobs;
    o.support_test = !s.no_support_test;
    auto rep = search_compact_solutions(F, o);
    r.manifest["bounds"] = {{"d", s.d}, {"D", s.D}, {"size", s.size}, {"s_degree", s.s_degree ? s.s_degree : s.D},
                            {"max_candidates", s.max_candidates}, {"side", s.side}};
    if (s.max_entry_support != ~std::size_t{0}) r.manifest["bounds"]["max_entry_support"] = s.max_entry_support;
    r.manifest["certificates"] = {{"search", to_string(rep.cert)}};
    json sols = json::array();
    for (auto& z : rep.solutions) sols.push_back({{"z", z.z.str()}, {"s", z.s.str()}});
    r.result = {{"candidates", rep.candidates}, {"total", rep.total}, {"support_rejected", rep.support_rejected},
                {"solve_rejected", rep.solve_rejected}, {"complete", rep.complete}, {"cert", to_string(rep.cert)},
                {"solutions", sols}};
    // a solution settles it; an empty exhaustive search is a "no" within the bounds
    Truth v = !rep.solutions.empty() ? Truth::yes : rep.complete && rep.cert == Cert::exact ? Truth::no : Truth::unknown;
    r.result["verdict"] = to_string(v);
    std::ostringstream os;
    os << rep.candidates << "/" << rep.total << " candidates, " << rep.support_rejected << " support-rejected, "
       << rep.solve_rejected << " solve-rejected, " << rep.solutions.size() << " solutions (" << to_string(rep.cert) << ")\n";
    for (auto& z : rep.solutions) os << "  z = " << z.z.str() << ", s = " << z.s.str() << "\n";
    r.text = os.str();
    r.code = exit_of(v);
    return r;
}

// --- output --------------------------------------------------------------------

int emit(const Common& c, Report& r) {
    r.manifest["schema_version"] = kSchemaVersion;
    r.manifest["tool"] = "cuntz";
    r.manifest["verb"] = r.verb;
    if (!c.manifest_path.empty()) {
        std::ofstream m(c.manifest_path, std::ios::binary);
        if (!m) throw InvalidInput("cannot write " + c.manifest_path);
        m << r.manifest.dump(2) << "\n";
    }
    if (c.out == "json") {
        json doc{{"schema_version", kSchemaVersion}, {"verb", r.verb}, {"manifest", r.manifest}, {"result", r.result}};
        std::cout << doc.dump(2) << "\n";
    } else if (c.out == "text") {
        std::cout << r.text;
    } else if (c.out == "dot") {
        if (!r.dot) throw InvalidInput("dot output is available for compute-w, compute-v and compute-lambda only");
        std::cout << *r.dot;
    } else {
        throw InvalidInput("--out must be json, text or dot");
    }
    return r.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cuntz semigroups of finite rings: subequivalence, W/V/Lambda, Cu axioms, states, sequences."};
    app.set_config("--config", "", "key = value file; keys are long option names, [verb] sections for verb options");
    app.require_subcommand(1);

    Common c;
    app.add_option("--ring", c.ring, "ring spec, e.g. zmod4, gf2, matrix(gf2,2), product(gf2,gf3)");
    app.add_option("--ring-file", c.ring_file, "file holding a ring spec (inline form or key = value lines)");
    app.add_option("--kmax", c.kmax, "largest matrix size in the truncation")->check(CLI::Range(1, 8));
    app.add_option("--budget", c.budget, "candidate budget per subequivalence search")->check(CLI::PositiveNumber);
    app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--seed", c.seed, "seed for randomized choices");
    app.add_option("--out", c.out, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));
    app.add_option("--manifest", c.manifest_path, "also write the manifest to this file");

    std::function<Report()> run;
    auto verb = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    PrecsimArgs pa;
    auto* precsim = verb("precsim", "decide a <=1 b (or the Malcolmson closure) with a witness");
    precsim->add_option("--a", pa.a, "matrix literal, e.g. [[1,0],[0,0]]")->required();
    precsim->add_option("--b", pa.b, "matrix literal")->required();
    precsim->add_option("--relation", pa.relation, "one or malcolmson")->check(CLI::IsMember({"one", "malcolmson"}));
    precsim->add_option("--depth", pa.depth, "Malcolmson chain depth");
    precsim->add_option("--size-cap", pa.size_cap, "largest intermediate matrix size");
    precsim->add_flag("--no-fast-path", pa.no_fast_path, "always run the generic search");
    precsim->callback([&] { run = [&] { return run_precsim(c, pa); }; });

    verb("compute-w", "classes, order and addition of W(R) up to kmax")->callback([&] { run = [&] { return run_compute_w(c); }; });
    verb("compute-v", "idempotent classes V(R) and the map into W(R)")->callback([&] { run = [&] { return run_compute_v(c); }; });

    MonoidArgs ma;
    auto monoid_opts = [&](CLI::App* s) {
        s->add_option("--monoid", ma.monoid, "N, N^r, Nbar, Nbar^r, nsd, saturating(n), max_chain(n), boolean(k), truncated_chain(n)");
        s->add_option("--monoid-file", ma.monoid_file, "JSON monoid: labels, zero, leq pairs, add table");
    };
    auto* lam = verb("compute-lambda", "interval completion of W(R) or of a given monoid");
    monoid_opts(lam);
    lam->callback([&] { run = [&] { return run_compute_lambda(c, ma); }; });
    auto* cu = verb("check-cu", "check the Cu axioms");
    monoid_opts(cu);
    cu->callback([&] { run = [&] { return run_check_cu(c, ma); }; });
    auto* comp = verb("compacts", "compact elements");
    monoid_opts(comp);
    comp->callback([&] { run = [&] { return run_compacts(c, ma); }; });

    StatesArgs sa;
    auto* states = verb("states", "state polytope at an order-unit");
    monoid_opts(states);
    states->add_option("--unit", sa.unit, "matrix literal (ring), label (finite monoid) or point like 1,0")->required();
    states->add_option("--variant", sa.variant, "dimension or sylvester")->check(CLI::IsMember({"dimension", "sylvester"}));
    states->add_option("--grid", sa.grid, "grid for symbolic monoids");
    states->add_option("--max-variables", sa.max_variables, "vertex enumeration limit");
    states->callback([&] { run = [&] { return run_states(c, ma, sa); }; });

    SeqArgs qa;
    auto seq_opts = [&](CLI::App* s) {
        // one string per occurrence: a vector target would split "[[1],[0]]" as a list
        s->add_option_function<std::string>("--x", [&](const std::string& m) { qa.x.push_back(m); }, "stage matrix; repeat per stage")
            ->trigger_on_parse()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        s->add_option_function<std::string>("--y", [&](const std::string& m) { qa.y.push_back(m); }, "witness y_{n+1}; repeat")
            ->trigger_on_parse()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        s->add_option("--tail", qa.tail, "stabilized or open")->check(CLI::IsMember({"stabilized", "open"}));
        s->add_option("--tail-witness", qa.tail_witness, "witness for the constant continuation");
        s->add_option("--seq", qa.file, "JSON sequence file {x, y, tail, tail_witness}");
    };
    auto* sv = verb("seq-validate", "check the witness identities of a sequence");
    seq_opts(sv);
    sv->callback([&] { run = [&] { return run_seq_validate(c, qa); }; });
    std::size_t extra = 1;
    auto* s2i = verb("seq-to-idem", "column-finite idempotent of a sequence");
    seq_opts(s2i);
    s2i->add_option("--extra", extra, "stages appended to a stabilized tail");
    s2i->callback([&] { run = [&] { return run_seq_to_idem(c, qa, extra); }; });
    std::string idem;
    auto* i2s = verb("idem-to-seq", "sequence of an idempotent matrix");
    i2s->add_option("--e", idem, "idempotent matrix literal")->required();
    i2s->callback([&] { run = [&] { return run_idem_to_seq(c, idem); }; });
    std::string chain_file;
    auto* sup = verb("seq-sup", "supremum of an increasing chain of sequences");
    sup->add_option("--chain", chain_file, "JSON file: array of sequences")->required();
    sup->callback([&] { run = [&] { return run_seq_sup(c, chain_file); }; });
    std::size_t search_size = 2;
    auto* sc = verb("seq-compact", "decide compactness and produce z = s z^2");
    seq_opts(sc);
    sc->add_option("--search-size", search_size, "size bound for the fallback witness search");
    sc->callback([&] { run = [&] { return run_seq_compact(c, qa, search_size); }; });

    std::string diag_a;
    auto* dg = verb("diagonalize", "diagonalize over Z/p^k with an operation certificate");
    dg->add_option("--a", diag_a, "matrix literal")->required();
    dg->callback([&] { run = [&] { return run_diagonalize(c, diag_a); }; });

    ShiftArgs xa;
    auto* shift = verb("shift", "monoid algebra of the shift relations");
    shift->require_subcommand(1);
    auto bounds = [&](CLI::App* s) {
        s->add_option("--d", xa.d, "number of variables")->check(CLI::Range(1, 8));
        s->add_option("--D", xa.D, "total degree bound")->check(CLI::Range(1, 8));
    };
    auto* nf = shift->add_subcommand("nf", "normal form of a word");
    nf->fallthrough();
    nf->add_option("--word", xa.word, "e.g. \"x0 x1 x0\"")->required();
    nf->callback([&] { run = [&] { return run_shift_nf(c, xa); }; });
    auto* mul = shift->add_subcommand("mul", "product of two polynomials");
    mul->fallthrough();
    bounds(mul);
    mul->add_option("--p", xa.p, "polynomial, e.g. \"x0 + 2 x1^2\"")->required();
    mul->add_option("--q", xa.q, "polynomial")->required();
    mul->callback([&] { run = [&] { return run_shift_mul(c, xa); }; });
    auto* st = shift->add_subcommand("st", "largest variable index occurring in every monomial");
    st->fallthrough();
    bounds(st);
    st->add_option("--p", xa.p, "polynomial")->required();
    st->callback([&] { run = [&] { return run_shift_st(c, xa); }; });
    auto* cs = shift->add_subcommand("compact-search", "search z = s z^2 among bounded matrices");
    cs->fallthrough();
    bounds(cs);
    cs->add_option("--size", xa.size, "matrix size")->check(CLI::Range(1, 3));
    cs->add_option("--max-entry-support", xa.max_entry_support, "monomials per entry of z");
    cs->add_option("--s-degree", xa.s_degree, "degree bound for s (0: same as D)");
    cs->add_option("--side", xa.side, "left (z = s z^2) or right (z = z^2 s)")->check(CLI::IsMember({"left", "right"}));
    cs->add_option("--max-candidates", xa.max_candidates, "enumeration budget");
    cs->add_flag("--no-support-test", xa.no_support_test, "send every candidate to the linear solve");
    cs->callback([&] { run = [&] { return run_shift_search(c, xa); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalid;
    }

    try {
        Report r = run();
        return emit(c, r);
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return invalid;
    } catch (const BoundExceeded& e) {
        std::cerr << "unknown: " << e.what() << "\n";
        return unknown;
    } catch (const InvariantBreach& e) {
        std::cerr << "invariant breach: " << e.what() << "\n";
        return breach;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return breach;
    }
}
