// Acceptance gate: runs every end-to-end check once and prints one verdict
// line per check. Exit status 0 iff all pass.

#include <cstdio>

#include <primeforms/verify.hpp>

int main() {
    auto results = primeforms::run_acceptance_checks();
    bool all = true;
    int i = 0;
    for (const auto& r : results) {
        std::printf("%s %2d %-40s (%.3f s)%s%s\n", r.pass ? "PASS" : "FAIL", ++i,
                    r.name.c_str(), r.seconds, r.detail.empty() ? "" : "  ",
                    r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "all checks passed" : "SOME CHECKS FAILED");
    return all ? 0 : 1;
}
