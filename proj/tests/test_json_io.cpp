#include "wiener/error.hpp"
#include "wiener/json_io.hpp"

#include <doctest.h>

#include <bit>
#include <cstdint>
#include <limits>
#include <random>

using namespace wiener;

namespace {

double random_bits(std::mt19937_64& rng)
{
    // Any finite double, including subnormals.
    while (true) {
        double x = std::bit_cast<double>(rng());
        if (std::isfinite(x)) {
            return x;
        }
    }
}

bool same_bits(const L1ZSeq& a, const L1ZSeq& b)
{
    if (a.support_size() != b.support_size() || a.tail().value() != b.tail().value()) {
        return false;
    }
    for (std::size_t i = 0; i < a.support_size(); ++i) {
        const auto& x = a.terms()[i];
        const auto& y = b.terms()[i];
        if (x.n != y.n || std::bit_cast<std::uint64_t>(x.c.real()) != std::bit_cast<std::uint64_t>(y.c.real())
            || std::bit_cast<std::uint64_t>(x.c.imag()) != std::bit_cast<std::uint64_t>(y.c.imag())) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_SUITE("json_io") {

TEST_CASE("l1z format") {
    L1ZSeq a = L1ZSeq::from_terms({{3, complex(1.0, -2.0)}, {-2, 0.5}}, CertUpper(0.25));
    Json j = to_json(a);
    CHECK(j.dump() == R"({"coeffs":[{"n":-2,"re":0.5,"im":0.0},{"n":3,"re":1.0,"im":-2.0}],"tail":0.25})");
    Json unordered = parse_json(R"({"coeffs":[{"n":3,"re":1.0,"im":-2.0},{"n":-2,"re":0.5,"im":0}],"tail":0.25})");
    CHECK(l1z_from_json(unordered) == a);
    CHECK(l1z_from_json(parse_json(R"({"coeffs":[]})")).empty());
}

TEST_CASE("l1z round trip is bit exact") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<Index> idx(-1000000, 1000000);
    for (int i = 0; i < 200; ++i) {
        std::map<Index, complex> m;
        for (int k = 0; k < 20; ++k) {
            m[idx(rng)] = complex(random_bits(rng), random_bits(rng));
        }
        std::vector<Term> t;
        for (auto [n, v] : m) {
            t.push_back({n, v});
        }
        L1ZSeq a = L1ZSeq::from_terms(std::move(t), CertUpper(std::abs(random_bits(rng))));
        L1ZSeq b = l1z_from_json(parse_json(dump(to_json(a))));
        CHECK(same_bits(a, b));
    }
}

TEST_CASE("l1z malformed input") {
    auto bad = [](const char* text) {
        try {
            (void)l1z_from_json(parse_json(text));
        } catch (const Error& e) {
            return e.kind() == ErrorKind::invalid_input;
        }
        return false;
    };
    CHECK(bad("{"));
    CHECK(bad("[]"));
    CHECK(bad(R"({"tail":0})"));
    CHECK(bad(R"({"coeffs":[{"n":1,"re":1,"im":0},{"n":1,"re":2,"im":0}]})"));
    CHECK(bad(R"({"coeffs":[{"n":1.5,"re":1,"im":0}]})"));
    CHECK(bad(R"({"coeffs":[{"n":1,"re":"x","im":0}]})"));
    CHECK(bad(R"({"coeffs":[{"n":1,"re":1,"im":0}],"tail":-1})"));
    CHECK(bad(R"({"coeffs":[{"n":100000000000000000000,"re":1,"im":0}]})"));
}

TEST_CASE("pl format and round trip") {
    PLFunction t = triangle(0.5, 1.0, complex(1.0, 0.25)).with_slack(CertUpper(1e-3));
    Json j = to_json(t);
    CHECK(j.contains("breakpoints"));
    CHECK(j.contains("values"));
    CHECK(j.contains("l1_slack"));
    CHECK(j["origin"].get<double>() == 0.5);
    CHECK_FALSE(to_json(triangle()).contains("origin"));
    CHECK(is_pl_json(j));
    CHECK(pl_from_json(parse_json(dump(j))) == t);

    PLFunction s = translate(t, 0.1);
    CHECK(pl_from_json(parse_json(dump(to_json(s)))) == s);

    CHECK(pl_from_json(parse_json(R"({"breakpoints":[],"values":[]})")).is_zero());
    CHECK_THROWS_AS((void)pl_from_json(parse_json(R"({"breakpoints":[0,1],"values":[{"re":1,"im":0},{"re":0,"im":0}]})")),
                    Error);
    CHECK_THROWS_AS((void)pl_from_json(parse_json(R"({"breakpoints":[0,1,2],"values":[]})")), Error);
}

TEST_CASE("certificate round trip") {
    InversionCertificate c;
    c.witness = delta(0) - delta(1, 0.5);
    c.residual = CertUpper(1.2e-10);
    c.params = {256, 64, 1e-9};
    Json j = to_json(c);
    CHECK(j.dump() == R"({"witness":{"coeffs":[{"n":0,"re":1.0,"im":0.0},{"n":1,"re":-0.5,"im":0.0}],"tail":0.0},"residual":1.2e-10,"params":{"grid":256,"degree":64,"target":1e-09}})");
    InversionCertificate back = certificate_from_json(parse_json(dump(j)));
    CHECK(back.witness == c.witness);
    CHECK(back.residual == c.residual);
    CHECK(back.params.grid == 256);
    CHECK(back.params.degree == 64);
    CHECK(back.params.target == 1e-9);
}

TEST_CASE("dump layout") {
    Json j = Json::object();
    j["norm"] = 1.0;
    CHECK(dump(j) == "{\n  \"norm\": 1.0\n}\n");
}

}
