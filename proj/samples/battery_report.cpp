// Runs the battery at a small scale on both generators and prints the tables.
#include <iostream>

#include <cirng/chaotic.hpp>
#include <cirng/stats/battery.hpp>

int main()
{
    cirng::stats::BatteryConfig cfg;
    cfg.scale = 0.1;

    auto xs = cirng::stats::WordSource::from_generator(cirng::seed_xorshift(1), "xorshift");
    cirng::stats::render_table(std::cout, cirng::stats::run_battery(xs, cfg));
    std::cout << "\n";

    auto ci = cirng::stats::WordSource::from_generator(cirng::make_ci_generator({}), "ci n=32 c=96");
    cirng::stats::render_table(std::cout, cirng::stats::run_battery(ci, cfg));
}
