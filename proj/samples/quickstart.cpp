// Autocovariance of MA(1), theta = 0.5, through the main library calls.
#include <szegolab/szegolab.hpp>

#include <cstdio>

using namespace szegolab;

int main()
{
    const AutocovSeq g{1.25, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

    const auto st = pacf_from_acov(g);
    for (std::size_t n = 1; n <= 4; ++n)
        std::printf("alpha_%zu = %+.12f   v_%zu = %.12f\n", n, st.alpha.alpha(n).real(), n, st.v[n]);

    const auto f = spectral_factors(g, 8, 1024);
    std::printf("G = %.12f   sigma = %.12f   m_1 = %.12f   r_1 = %.12f\n", geometric_mean(f.cepstrum), f.sigma(),
                f.ma[1].real(), f.ar[1].real());

    const std::vector<std::size_t> orders{1, 2, 3, 8};
    const auto rep = strong_szego_check(g, orders, 1024);
    for (std::size_t i = 0; i < orders.size(); ++i)
        std::printf("det T_%zu / G^%zu = %.12f\n", orders[i], orders[i], rep.ratios[i]);
    std::printf("E (cepstral) = %.12f\n", rep.e_cepstral);

    const auto flags = classify_model(ModelSpec::ma_q({0.5}), 64);
    std::printf("sz %s, baxter %s, lrd_di %s\n", std::string(to_string(flags.sz)).c_str(),
                std::string(to_string(flags.baxter)).c_str(), std::string(to_string(flags.lrd_di)).c_str());
}
