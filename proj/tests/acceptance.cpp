#include <cstdio>
#include <cstring>
#include <string>

#include "spiked/verify/suites.hpp"

int main(int argc, char** argv) {
    spiked::verify::SuiteOptions options;
    std::string suite = "all";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            options.quick = true;
        } else if (std::strcmp(argv[i], "--suite") == 0 && i + 1 < argc) {
            suite = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--quick] [--suite ID|all]\n", argv[0]);
            return 2;
        }
    }
    if (!spiked::verify::is_suite_id(suite)) {
        std::fprintf(stderr, "unknown suite '%s'\n", suite.c_str());
        return 2;
    }
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    int failed = 0;
    const auto results = spiked::verify::run_suites(suite, options, [&](const spiked::verify::SuiteResult& r) {
        std::printf("%s\n", r.line().c_str());
        failed += !r.pass;
    });
    std::printf("acceptance: %zu of %zu criteria passed (%s)\n", results.size() - failed, results.size(),
                spiked::verify::kThresholdsVersion);
    return failed == 0 ? 0 : 1;
}
