#include <doctest.h>

#include <sstream>

#include "aliquot/mean_values.hpp"
#include "oracle.hpp"

using namespace aliquot;

TEST_CASE("constants") {
  CHECK(Constants::zeta2 > 1.6449340668);
  CHECK(Constants::zeta2 < 1.6449340669);
  CHECK(Constants::c_mean_ss == doctest::Approx(0.5304370087).epsilon(1e-9));
  CHECK(Constants::c_mean_ratio == doctest::Approx(1.0608740174).epsilon(1e-9));
}

TEST_CASE("hand-computed partial sums") {
  CHECK(mean_sigma(10).sum_int == 87);
  CHECK(mean_sigma(10).mean == doctest::Approx(8.7));
  CHECK(mean_sigma(1).sum_int == 1);

  CHECK(mean_s_sigma(6).sum_int == 48);  // 1+4+5+11+7+20, oracle-checked
  CHECK(mean_s_sigma(1).sum_int == 1);

  CHECK(mean_s_s(6).sum_int == 15);  // 0+1+1+4+1+8
  CHECK(mean_s_s(2).sum_int == 1);

  auto r3 = mean_ratio_s_s(3);
  CHECK(r3.mode == SumMode::exact_rational);
  CHECK(r3.sum_rat == make_rat(5, 6));
  CHECK(mean_ratio_s_s(1).sum_rat == make_rat(0, 1));
}

TEST_CASE("linearity: sum S_s = sum S_sigma - sum sigma at every checkpoint") {
  auto cps = mean_checkpoints({10, 100, 1000, 12345});
  for (std::size_t i = 0; i + 3 < cps.size(); i += 4) {
    REQUIRE(cps[i].stat == MeanStat::sigma);
    REQUIRE(cps[i + 1].stat == MeanStat::s_sigma);
    REQUIRE(cps[i + 2].stat == MeanStat::s_s);
    CHECK(cps[i + 2].sum_int == cps[i + 1].sum_int - cps[i].sum_int);
  }
}

TEST_CASE("partial sums against the oracle sieve") {
  oracle::SimpleSieve sieve(5000);
  u64 ssum = 0, sssum = 0, sss = 0;
  for (u64 n = 1; n <= 5000; ++n) {
    ssum += sieve.sigma[n];
    sssum += sieve.s_sigma[n];
    sss += sieve.s_s(n);
  }
  CHECK(mean_sigma(5000).sum_int == Int(ssum));
  CHECK(mean_s_sigma(5000).sum_int == Int(sssum));
  CHECK(mean_s_s(5000).sum_int == Int(sss));
}

TEST_CASE("ratio sum switches to compensated mode above the threshold") {
  MeanOptions opt;
  opt.exact_ratio_threshold = 1000;
  auto below = mean_ratio_s_s(1000, opt);
  CHECK(below.mode == SumMode::exact_rational);
  auto above = mean_ratio_s_s(2000, opt);
  CHECK(above.mode == SumMode::compensated_double);
  // the two accumulations agree to double precision at the crossover
  auto exact_opt = opt;
  exact_opt.exact_ratio_threshold = 2000;
  auto exact = mean_ratio_s_s(2000, exact_opt);
  CHECK(above.sum_value == doctest::Approx(exact.sum_rat.get_d()).epsilon(1e-14));
}

TEST_CASE("means approach their limits at 1e6") {
  auto cps = mean_checkpoints({1000000});
  for (const auto& cp : cps) {
    double target = cp.limit_constant *
                    (cp.stat == MeanStat::ratio_s_s ? 1.0 : static_cast<double>(cp.x));
    CHECK(cp.mean == doctest::Approx(target).epsilon(0.005));
    CHECK(cp.normalized_error < 10.0);
  }
}

TEST_CASE("parse_checkpoints") {
  CHECK(parse_checkpoints("decades:1e3:1e6") == std::vector<u64>{1000, 10000, 100000, 1000000});
  CHECK(parse_checkpoints("10,20,30") == std::vector<u64>{10, 20, 30});
  CHECK(parse_checkpoints("1e2") == std::vector<u64>{100});
  CHECK_THROWS_AS(parse_checkpoints("decades:10"), std::invalid_argument);
  CHECK_THROWS_AS(parse_checkpoints("decades:5:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_checkpoints("abc"), std::invalid_argument);
}

TEST_CASE("csv schema") {
  std::ostringstream out;
  write_mean_csv(out, mean_checkpoints({10}));
  std::string text = out.str();
  CHECK(text.substr(0, 48) == "x,statistic,partial_sum,mean,limit,normalized_er");
  CHECK(text.find("10,sigma,87,") != std::string::npos);
  CHECK(text.find("10,S_s_over_n,") != std::string::npos);
}
