// Prints the first words of the default generator and the worked five-cell trace.
#include <cstdio>
#include <vector>

#include <cirng/chaotic.hpp>

int main()
{
    auto gen = cirng::make_ci_generator({.seed1 = 0x2545F491u, .seed2 = 0x9E3779B9u});
    for (int i = 0; i < 8; ++i)
        std::printf("%08x\n", gen());

    const std::vector<std::size_t> m = {4, 5, 4};
    const std::size_t s[] = {2, 4, 2, 2, 5, 1, 1, 5, 5, 3, 2, 3, 3};
    cirng::ChaoticGenerator small(cirng::seed_from_time(484084, 5), cirng::SequenceLengths(m),
                                  cirng::SequenceIndices::from_one_based(s), true);
    for (int i = 0; i < 20; ++i)
        std::putchar(small.next_bit() ? '1' : '0');
    std::putchar('\n');
}
