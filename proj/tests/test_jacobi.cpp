#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "paramod/jacobi.hpp"
#include "paramod/verify.hpp"

using namespace paramod;

TEST_CASE("bivariate multiplication") {
    SECTION("binomial times binomial") {
        // (1 + qr)(1 + q r^-1) = 1 + qr + q r^-1 + q^2
        BiSeries a = BiSeries::one(4);
        a.coeff[{1, 1}] = 1;
        BiSeries b = BiSeries::one(4);
        b.coeff[{1, -1}] = 1;
        BiSeries c = bi_mul(a, b);
        CHECK(c.at(0, 0) == 1);
        CHECK(c.at(1, 1) == 1);
        CHECK(c.at(1, -1) == 1);
        CHECK(c.at(2, 0) == 1);
        CHECK(c.coeff.size() == 4);
    }
    SECTION("one is neutral") {
        BiSeries a = BiSeries::one(6);
        a.coeff[{2, 3}] = -5;
        a.coeff[{1, -2}] = 7;
        CHECK(same_table(bi_mul(a, BiSeries::one(6)), a));
    }
    SECTION("associative on random sparse series") {
        std::mt19937_64 rng(17);
        auto random_series = [&](int qmax) {
            BiSeries s;
            s.qmax = qmax;
            for (int i = 0; i < 6; ++i) {
                int n = int(rng() % (unsigned long)(qmax + 1));
                int l = int(rng() % 7) - 3;
                s.coeff[{n, l}] = Int(long(rng() % 9) - 4);
            }
            for (auto it = s.coeff.begin(); it != s.coeff.end();)
                it = (it->second == 0) ? s.coeff.erase(it) : std::next(it);
            return s;
        };
        for (int trial = 0; trial < 20; ++trial) {
            BiSeries a = random_series(8), b = random_series(8), c = random_series(8);
            CHECK(same_table(bi_mul(bi_mul(a, b), c), bi_mul(a, bi_mul(b, c))));
        }
    }
    SECTION("window overflow is detected") {
        BiSeries a = BiSeries::one(2);
        a.coeff[{0, 8}] = 1;  // window cap is 2*2+4 = 8
        CHECK_THROWS_AS(bi_mul(a, a), WindowOverflow);
    }
    SECTION("truncation mismatch rejected") {
        CHECK_THROWS_AS(bi_mul(BiSeries::one(2), BiSeries::one(3)), ChartMismatch);
    }
}

TEST_CASE("coefficient table values") {
    FTable t = expand_f_table(12);
    SECTION("constant row") {
        CHECK(t.at(0, -1) == 1);
        CHECK(t.at(0, 0) == 2);
        CHECK(t.at(0, 1) == 1);
        for (int l = 2; l <= 8; ++l) {
            CHECK(t.at(0, l) == 0);
            CHECK(t.at(0, -l) == 0);
        }
    }
    SECTION("first row, from a hand expansion of the defining product") {
        int want[7] = {-2, -2, 2, 4, 2, -2, -2};
        for (int l = -3; l <= 3; ++l) CHECK(t.at(1, l) == want[l + 3]);
        CHECK(t.at(1, 4) == 0);
    }
    SECTION("second row") {
        int want[11] = {1, -2, -6, -4, 5, 12, 5, -4, -6, -2, 1};
        for (int l = -5; l <= 5; ++l) CHECK(t.at(2, l) == want[l + 5]);
    }
    SECTION("symmetry under l negation for positive n") {
        for (const auto& [k, v] : t.f)
            if (k.first >= 1) CHECK(t.at(k.first, -k.second) == v);
    }
    SECTION("observed support envelope") {
        int attained = 0;
        for (const auto& [k, v] : t.f) {
            if (v == 0) continue;
            CHECK(long(k.second) * k.second <= 12L * k.first + 1);
            if (long(k.second) * k.second == 12L * k.first + 1) ++attained;
        }
        CHECK(attained > 0);
    }
}

TEST_CASE("table matches the independent oracle") {
    for (int qmax : {0, 1, 6, 12}) {
        FTable a = expand_f_table(qmax);
        FTable b = expand_f_table_oracle(qmax);
        CHECK(a.f == b.f);
    }
}

TEST_CASE("window sufficiency") {
    // recomputation with a wider truncation changes no tabulated entry
    FTable a = expand_f_table(8);
    FTable b = expand_f_table(12);
    for (const auto& [k, v] : a.f) CHECK(b.at(k.first, k.second) == v);
    for (const auto& [k, v] : b.f)
        if (k.first <= 8) CHECK(a.at(k.first, k.second) == v);
}

TEST_CASE("table serialization") {
    FTable t = expand_f_table(6);
    std::stringstream ss;
    write_ftable(ss, t);
    FTable u = read_ftable(ss);
    CHECK(u.qmax == 6);
    CHECK(u.f == t.f);
    std::string first;
    std::stringstream ss2;
    write_ftable(ss2, t);
    std::getline(ss2, first);
    CHECK(first == "ftable qmax=6");
    std::stringstream bad("not a table\n");
    CHECK_THROWS_AS(read_ftable(bad), ParseError);
}

TEST_CASE("determinism") {
    FTable a = expand_f_table(10), b = expand_f_table(10);
    std::stringstream sa, sb;
    write_ftable(sa, a);
    write_ftable(sb, b);
    CHECK(sa.str() == sb.str());
}
