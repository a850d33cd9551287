// Acceptance gate: runs every verification suite at full scale with the
// pinned default configuration and prints one line per check.  Exits
// nonzero if any suite records a failure.

#include <cstdio>

#include <resq/verify.hpp>

int main() {
    resq::VerifyConfig cfg;  // seed 90021, 200 trials, tol 1e-6
    std::printf("seed %llu, %d trials, tol %.1e\n", (unsigned long long)cfg.seed, cfg.trials,
                cfg.tol);
    auto recs = resq::run_verification(cfg);
    int width = 0;
    for (const auto& r : recs) width = std::max(width, (int)r.name.size());
    bool ok = true;
    for (const auto& r : recs) {
        std::printf("%-5s %-*s  %4d trials, %d failures, worst %.3e  (%s)\n",
                    r.pass ? "pass" : "FAIL", width, r.name.c_str(), r.trials, r.failures,
                    r.worst, r.note.c_str());
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
