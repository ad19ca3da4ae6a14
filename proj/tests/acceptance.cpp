// One line per acceptance criterion; exit status 0 iff all pass.

#include "cqm/battery.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>

int main(int argc, char** argv) {
    cqm::BatteryConfig config;
    config.seed = 7;
    config.eps = 1e-9;
    config.jobs = 1;
    if (argc > 1) config.jobs = static_cast<unsigned>(std::atoi(argv[1]));

    // Wall-time ceilings in seconds, where the criterion states one.
    const std::map<int, double> limits{{1, 30.0}, {3, 60.0}, {8, 5.0}};

    const auto results = cqm::run_battery(config);
    bool all = true;
    for (const auto& r : results) {
        bool pass = r.pass;
        std::string note;
        if (auto it = limits.find(r.id); it != limits.end() && r.seconds >= it->second) {
            pass = false;
            note = " [over time limit]";
        }
        all = all && pass;
        std::printf("%s  %2d  %-34s %s (%.2fs)%s\n", pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.summary.c_str(),
                    r.seconds, note.c_str());
    }
    std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
    return all ? 0 : 1;
}
