// Command-line front end.
//
//   quantify  compute a weight/robustness certificate for a state file
//   verify    run the randomized self-check suites, or re-check a
//             serialized certificate against the state it refers to
//   play      simulate an exclusion game shot by shot, one CSV row per shot
//
// Exit codes: 0 success, 1 a verification check failed, 2 unreadable or
// malformed input, 3 the solver gave up.  Reports are written before the
// exit code is decided, and identical configurations (including the seed)
// produce byte-identical output: everything is dumped through the same
// canonical serializer and nothing (timestamps, hostnames) leaks in.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <resq/resq.hpp>

namespace {

using resq::json;

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open for writing: " + path);
    f << text;
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

// full-precision numeric cell for CSV rows; shortest decimal that parses back
// to the same double, so CSV output is as reproducible as the JSON reports
std::string cell(double v) { return json(v).dump(); }

int sample(const std::vector<double>& p, resq::Rng& rng) {
    double u = rng.uniform(), acc = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return (int)i;
    }
    return (int)p.size() - 1;
}

// ---------------------------------------------------------------- quantify

struct QuantifyArgs {
    std::string state, free_set, quantity = "weight", out, game_out;
    double tol = 1e-6;
    bool revalidate = false;
};

int cmd_quantify(const QuantifyArgs& a) {
    resq::Density rho(resq::load_json_file(a.state).get<resq::Mat>());
    auto f = resq::load_json_file(a.free_set).get<resq::FreeSetSpec>();

    const bool want_w = a.quantity != "robustness";
    const bool want_r = a.quantity != "weight";
    json doc;
    bool ok = true;
    if (want_w) {
        auto cert = resq::weight(rho, f);
        ok = resq::check_certificate(cert, rho, a.tol).pass && ok;
        if (!a.game_out.empty()) {
            if (cert.w <= 1e-9)
                throw std::invalid_argument("quantify: --game-out needs a state with weight > 0");
            emit_json(a.game_out, json(resq::build_dual_game(rho, cert)));
        }
        if (want_r)
            doc["weight"] = cert;
        else
            doc = cert;
    }
    if (want_r) {
        auto cert = resq::robustness(rho, f);
        ok = resq::check_certificate(cert, rho, a.tol).pass && ok;
        if (want_w)
            doc["robustness"] = cert;
        else
            doc = cert;
    }
    doc["state_digest"] = resq::digest_hex(json(rho.m));
    emit_json(a.out, doc);

    if (a.revalidate) {
        // round-trip through the serialized artifact (the file when one was
        // written) and re-derive every claim from the parsed copy alone
        json back = a.out.empty() ? json::parse(doc.dump(2)) : resq::load_json_file(a.out);
        if (want_w) {
            auto cert = (want_r ? back.at("weight") : back).get<resq::WeightCertificate>();
            ok = resq::check_certificate(cert, rho, a.tol).pass && ok;
        }
        if (want_r) {
            auto cert = (want_w ? back.at("robustness") : back).get<resq::RobustnessCertificate>();
            ok = resq::check_certificate(cert, rho, a.tol).pass && ok;
        }
    }
    return ok ? 0 : 1;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    std::string target = "all", certificate, state, out, format = "json";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 200;
    double tol = 1e-6;
    bool revalidate = false;
};

using SuiteFn = resq::CheckRecord (*)(const resq::VerifyConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"binary-exclusion", &resq::verify_binary_exclusion},
        {"weight-duality", &resq::verify_weight_duality},
        {"qubit-closed-form", &resq::verify_qubit_closed_form},
        {"witness-game", &resq::verify_witness_advantage},
        {"shared-ratio", &resq::verify_shared_ratio},
        {"exclusion-optimality", &resq::verify_exclusion_optimality},
        {"independent-ratio", &resq::verify_independent_ratio},
        {"exclusion-advantage", &resq::verify_exclusion_advantage},
        {"robustness-games", &resq::verify_robustness_games},
        {"empirical", &resq::verify_empirical_frequencies},
    };
    return table;
}

std::vector<std::string> suite_names() {
    std::vector<std::string> n{"all"};
    for (const auto& [name, fn] : suites()) n.push_back(name);
    return n;
}

// one row per randomized instance: state, both quantifiers, the game built
// from the weight witness, and the error ratio it realizes.  The summary is
// a pure function of these rows, which `--revalidate` re-checks after a
// round trip through the file.
json make_rows(const resq::VerifyConfig& cfg, json& summary) {
    resq::Rng rng(cfg.seed ^ 0xc0ffee1234567890ull);
    json rows = json::array();
    double max_gap = 0;
    int certified = 0, bound_ok = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        auto f = resq::detail_verify::spec_for(t, rng);
        auto draw = resq::detail_verify::resourceful(f, 0.02, rng);
        auto& wc = draw.cert;
        auto rc = resq::robustness(draw.rho, f);
        bool cert_ok = resq::check_certificate(wc, draw.rho, cfg.tol).pass &&
                       resq::check_certificate(rc, draw.rho, cfg.tol).pass;
        auto game = resq::build_dual_game(draw.rho, wc);
        auto qr = resq::qc_ratio_shared(game.channels, game.measurement, draw.rho, f);

        json adv;
        if (qr.numerator <= 1e-10)
            adv = "inf";
        else if (qr.saturated)
            adv = nullptr;
        else
            adv = -std::log2(qr.ratio);

        const bool saturated = wc.w >= 1.0 - 1e-6;
        bool bound = saturated ? qr.numerator <= cfg.tol : qr.ratio >= 1.0 - wc.w - 1e-7;
        if (!saturated && !qr.saturated)
            max_gap = std::max(max_gap, std::abs(qr.ratio - (1.0 - wc.w)));
        certified += cert_ok;
        bound_ok += bound;

        rows.push_back({{"trial", t},
                        {"variant", json(f).at("variant")},
                        {"state_digest", resq::digest_hex(json(draw.rho.m))},
                        {"game_digest", resq::digest_hex(json(game))},
                        {"w", wc.w},
                        {"r", resq::scalar_to_json(rc.r)},
                        {"perr_quantum", qr.numerator},
                        {"perr_classical", qr.denominator},
                        {"ratio", qr.ratio},
                        {"info_advantage", adv},
                        {"saturated", saturated},
                        {"nonunique_face", wc.nonunique_face},
                        {"certified", cert_ok},
                        {"ratio_bound_ok", bound}});
    }
    summary = {{"rows", cfg.trials},
               {"certified", certified},
               {"ratio_bound_ok", bound_ok},
               {"max_ratio_gap", max_gap}};
    return rows;
}

// recompute the summary from serialized rows; must reproduce it bit for bit
json summarize_rows(const json& rows) {
    double max_gap = 0;
    int certified = 0, bound_ok = 0;
    for (const auto& row : rows) {
        certified += row.at("certified").get<bool>();
        bound_ok += row.at("ratio_bound_ok").get<bool>();
        if (!row.at("saturated").get<bool>() && !row.at("ratio").is_null()) {
            double ratio = row.at("ratio").get<double>();
            double w = row.at("w").get<double>();
            max_gap = std::max(max_gap, std::abs(ratio - (1.0 - w)));
        }
    }
    return {{"rows", (int)rows.size()},
            {"certified", certified},
            {"ratio_bound_ok", bound_ok},
            {"max_ratio_gap", max_gap}};
}

json record_json(const resq::CheckRecord& r) {
    return {{"name", r.name},     {"trials", r.trials}, {"failures", r.failures},
            {"worst", r.worst},   {"note", r.note},     {"pass", r.pass}};
}

std::string rows_csv(const json& rows) {
    std::ostringstream os;
    os << "trial,variant,w,r,ratio,perr_quantum,perr_classical,info_advantage,"
          "saturated,certified,state_digest,game_digest\n";
    for (const auto& row : rows) {
        auto num = [&](const char* key) {
            const json& v = row.at(key);
            return v.is_string() ? v.get<std::string>()
                                 : (v.is_null() ? std::string("nan") : cell(v.get<double>()));
        };
        os << row.at("trial").get<int>() << ',' << row.at("variant").get<std::string>() << ','
           << num("w") << ',' << num("r") << ',' << num("ratio") << ',' << num("perr_quantum")
           << ',' << num("perr_classical") << ',' << num("info_advantage") << ','
           << (row.at("saturated").get<bool>() ? 1 : 0) << ','
           << (row.at("certified").get<bool>() ? 1 : 0) << ','
           << row.at("state_digest").get<std::string>() << ','
           << row.at("game_digest").get<std::string>() << '\n';
    }
    return os.str();
}

int verify_certificate_file(const VerifyArgs& a) {
    resq::Density rho(resq::load_json_file(a.state).get<resq::Mat>());
    json cj = resq::load_json_file(a.certificate);
    const std::string quantity = cj.value("quantity", "");
    resq::CertCheck chk;
    if (quantity == "weight")
        chk = resq::check_certificate(cj.get<resq::WeightCertificate>(), rho, a.tol);
    else if (quantity == "robustness")
        chk = resq::check_certificate(cj.get<resq::RobustnessCertificate>(), rho, a.tol);
    else
        throw std::invalid_argument("certificate: unknown quantity tag");

    json report = {{"command", "verify"},
                   {"mode", "certificate"},
                   {"quantity", quantity},
                   {"state_digest", resq::digest_hex(json(rho.m))},
                   {"certificate_digest", resq::digest_hex(cj)},
                   {"pass", chk.pass},
                   {"detail", chk.detail}};
    emit_json(a.out, report);
    return chk.pass ? 0 : 1;
}

int cmd_verify(const VerifyArgs& a) {
    if (!a.certificate.empty()) return verify_certificate_file(a);
    if (!a.seed_set) throw std::invalid_argument("verify: --seed is required for suite runs");

    resq::VerifyConfig cfg{a.seed, a.trials, a.tol};
    std::vector<resq::CheckRecord> recs;
    for (const auto& [name, fn] : suites())
        if (a.target == "all" || a.target == name) recs.push_back(fn(cfg));

    json checks = json::array();
    bool ok = true;
    for (const auto& r : recs) {
        checks.push_back(record_json(r));
        ok = ok && r.pass;
    }
    json summary;
    json rows = make_rows(cfg, summary);
    summary["checks_passed"] = (int)std::count_if(recs.begin(), recs.end(),
                                                  [](const auto& r) { return r.pass; });
    summary["checks_total"] = (int)recs.size();
    summary["pass"] = ok;

    json report = {{"command", "verify"}, {"target", a.target}, {"seed", a.seed},
                   {"trials", a.trials},  {"tol", a.tol},       {"checks", checks},
                   {"rows", rows},        {"summary", summary}};
    report["report_digest"] = resq::digest_hex(report);

    if (a.format == "csv")
        emit(a.out, rows_csv(rows));
    else
        emit_json(a.out, report);

    for (const auto& r : recs)
        if (!r.pass)
            std::cerr << "FAIL " << r.name << ": " << r.failures << "/" << r.trials
                      << " trials, worst " << r.worst << " (" << r.note << ")\n";

    if (a.revalidate && a.format == "json") {
        json back = a.out.empty() ? report : resq::load_json_file(a.out);
        json body = back;
        body.erase("report_digest");
        if (back.at("report_digest") != resq::digest_hex(body)) {
            std::cerr << "FAIL revalidate: report digest mismatch\n";
            ok = false;
        }
        json resum = summarize_rows(back.at("rows"));
        for (auto& [key, val] : resum.items())
            if (back.at("summary").at(key) != val) {
                std::cerr << "FAIL revalidate: summary field " << key
                          << " not reproducible from rows\n";
                ok = false;
            }
        for (const auto& c : back.at("checks"))
            if (c.at("pass").get<bool>() != (c.at("failures").get<int>() == 0)) {
                std::cerr << "FAIL revalidate: inconsistent check record\n";
                ok = false;
            }
    }
    return ok ? 0 : 1;
}

// -------------------------------------------------------------------- play

struct PlayArgs {
    std::string ensemble, povm, game, state, out;
    std::uint64_t seed = 0;
    int trials = 10000;
};

int cmd_play(const PlayArgs& a) {
    resq::StateEnsemble e;
    resq::Povm m;
    if (!a.game.empty()) {
        if (a.state.empty()) throw std::invalid_argument("play: --game needs --state");
        json gj = resq::load_json_file(a.game);
        auto game = gj.get<resq::DualGame>();
        resq::Density rho(resq::load_json_file(a.state).get<resq::Mat>());
        e = resq::ensemble_of_states(game.channels, rho).ensemble;
        m = a.povm.empty() ? game.measurement
                           : resq::Povm(resq::load_json_file(a.povm).get<resq::Povm>());
    } else {
        if (a.ensemble.empty() || a.povm.empty())
            throw std::invalid_argument("play: needs --ensemble and --povm, or --game");
        e = resq::load_json_file(a.ensemble).get<resq::StateEnsemble>();
        m = resq::load_json_file(a.povm).get<resq::Povm>();
    }
    if (!e.states.empty() && !m.effects.empty() && e.states[0].rows() != m.effects[0].rows())
        throw std::invalid_argument("play: measurement dimension does not match ensemble");

    // optimal classical post-processing is fixed up front; the game then
    // reduces to sampling x ~ priors, a ~ Born rule, and flagging shots
    // where the excluded label was the one actually sent
    auto fixed = resq::perr_exclusion_fixed(e, m);
    resq::Rng rng(a.seed);
    std::ostringstream os;
    os << "trial,x,g,error\n";
    for (int t = 0; t < a.trials; ++t) {
        int x = sample(e.priors, rng);
        std::vector<double> born(m.effects.size());
        double total = 0;
        for (std::size_t k = 0; k < m.effects.size(); ++k) {
            double p = std::real(resq::hs_inner(m.effects[k], e.states[x]));
            born[k] = p < 1e-14 ? 0.0 : p;  // exact exclusions stay exact
            total += born[k];
        }
        for (double& p : born) p /= total;
        int g = fixed.assignment[sample(born, rng)];
        os << t << ',' << x << ',' << g << ',' << (g == x ? 1 : 0) << '\n';
    }
    emit(a.out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weight and robustness certificates for convex resource sets, "
                 "exclusion games, and randomized self-checks"};
    app.require_subcommand(1);

    QuantifyArgs qa;
    auto* q = app.add_subcommand("quantify", "compute a certificate for a state");
    q->add_option("--state", qa.state, "density matrix JSON")->required();
    q->add_option("--free-set", qa.free_set, "free set JSON")->required();
    q->add_option("--quantity", qa.quantity, "weight | robustness | both")
        ->check(CLI::IsMember({"weight", "robustness", "both"}));
    q->add_option("--tol", qa.tol, "certificate gap tolerance");
    q->add_option("--out", qa.out, "output path (default stdout)");
    q->add_option("--game-out", qa.game_out, "also write the game built from the weight witness");
    q->add_flag("--revalidate", qa.revalidate, "re-check the serialized artifact");

    VerifyArgs va;
    auto* v = app.add_subcommand("verify", "randomized self-checks / certificate re-check");
    v->add_option("--target", va.target, "suite to run")->check(CLI::IsMember(suite_names()));
    v->add_option("--seed", va.seed, "RNG seed (required for suite runs)")
        ->each([&va](const std::string&) { va.seed_set = true; });
    v->add_option("--trials", va.trials, "trials per suite")->check(CLI::PositiveNumber);
    v->add_option("--tol", va.tol, "primary tolerance");
    v->add_option("--certificate", va.certificate, "certificate JSON to re-check");
    v->add_option("--state", va.state, "state the certificate refers to");
    v->add_option("--format", va.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    v->add_option("--out", va.out, "report path (default stdout)");
    v->add_flag("--revalidate", va.revalidate, "re-check the written report");

    PlayArgs pa;
    auto* p = app.add_subcommand("play", "simulate an exclusion game, CSV per shot");
    p->add_option("--ensemble", pa.ensemble, "state ensemble JSON");
    p->add_option("--povm", pa.povm, "measurement JSON");
    p->add_option("--game", pa.game, "subchannel game JSON (with --state)");
    p->add_option("--state", pa.state, "input state for --game");
    p->add_option("--seed", pa.seed, "RNG seed")->required();
    p->add_option("--trials", pa.trials, "number of shots")->check(CLI::PositiveNumber);
    p->add_option("--out", pa.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (q->parsed()) return cmd_quantify(qa);
        if (v->parsed()) return cmd_verify(va);
        return cmd_play(pa);
    } catch (const json::exception& err) {
        std::cerr << "error: malformed input: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::runtime_error& err) {
        std::cerr << "error: solver failure: " << err.what() << "\n";
        return 3;
    }
}
