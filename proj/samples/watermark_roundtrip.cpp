// Embeds the built-in logo into the synthetic carrier, attacks it and scores
// the extracted watermark.
#include <cstdio>

#include <cirng/imaging/attacks.hpp>
#include <cirng/imaging/synthetic.hpp>
#include <cirng/watermark/watermark.hpp>

int main()
{
    using namespace cirng;
    const auto carrier = imaging::make_test_carrier();
    const auto logo = imaging::make_test_watermark();
    const watermark::EmbeddingKey key{0xC0FFEEu, 0xBADC0DEu, watermark::Mode::Unauthenticated};

    const auto marked = watermark::embed(carrier, logo, key);
    std::printf("PSNR %.2f dB\n", imaging::psnr(carrier, marked));
    std::printf("no attack  %.2f%%\n", watermark::similarity(logo, watermark::extract(marked, key, 64, 64)));
    const auto cropped = imaging::crop_attack(marked, 50);
    std::printf("crop 50    %.2f%%\n", watermark::similarity(logo, watermark::extract(cropped, key, 64, 64)));
    const auto rotated = imaging::rotate_attack(marked, 5.0);
    std::printf("rotate 5   %.2f%%\n", watermark::similarity(logo, watermark::extract(rotated, key, 64, 64)));
}
