#include "wiener/json_io.hpp"

#include "wiener/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wiener {

namespace {

constexpr std::int64_t kMaxIndex = std::int64_t{1} << 53;

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::invalid_input, what);
}

const Json& field(const Json& j, const char* name)
{
    if (!j.is_object()) {
        bad(std::string("expected an object with field \"") + name + "\"");
    }
    auto it = j.find(name);
    if (it == j.end()) {
        bad(std::string("missing field \"") + name + "\"");
    }
    return *it;
}

double number(const Json& j, const char* name)
{
    if (!j.is_number()) {
        bad(std::string("field \"") + name + "\" must be a number");
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
        bad(std::string("field \"") + name + "\" must be finite");
    }
    return v;
}

double number_field(const Json& j, const char* name)
{
    return number(field(j, name), name);
}

CertUpper bound_field(const Json& j, const char* name)
{
    double v = number_field(j, name);
    if (v < 0.0) {
        bad(std::string("field \"") + name + "\" must be nonnegative");
    }
    return CertUpper(v);
}

std::size_t size_field(const Json& j, const char* name)
{
    const Json& v = field(j, name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        bad(std::string("field \"") + name + "\" must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

Json complex_json(complex c)
{
    Json j = Json::object();
    j["re"] = c.real();
    j["im"] = c.imag();
    return j;
}

complex complex_from(const Json& j)
{
    return {number_field(j, "re"), number_field(j, "im")};
}

} // namespace

Json to_json(const L1ZSeq& a)
{
    Json coeffs = Json::array();
    for (const auto& t : a.terms()) {
        Json c = Json::object();
        c["n"] = t.n;
        c["re"] = t.c.real();
        c["im"] = t.c.imag();
        coeffs.push_back(std::move(c));
    }
    Json j = Json::object();
    j["coeffs"] = std::move(coeffs);
    j["tail"] = a.tail().value();
    return j;
}

L1ZSeq l1z_from_json(const Json& j)
{
    const Json& coeffs = field(j, "coeffs");
    if (!coeffs.is_array()) {
        bad("field \"coeffs\" must be an array");
    }
    std::vector<Term> terms;
    terms.reserve(coeffs.size());
    for (const Json& c : coeffs) {
        const Json& n = field(c, "n");
        if (!n.is_number_integer()) {
            bad("coefficient index must be an integer");
        }
        if (n.is_number_unsigned() && n.get<std::uint64_t>() > static_cast<std::uint64_t>(kMaxIndex)) {
            bad("coefficient index out of range");
        }
        const auto idx = n.get<std::int64_t>();
        if (idx > kMaxIndex || idx < -kMaxIndex) {
            bad("coefficient index out of range");
        }
        terms.push_back({idx, complex_from(c)});
    }
    CertUpper tail = j.contains("tail") ? bound_field(j, "tail") : CertUpper{};
    return L1ZSeq::from_terms(std::move(terms), tail);
}

Json to_json(const PLFunction& f)
{
    Json j = Json::object();
    if (f.origin() != 0.0) {
        j["origin"] = f.origin();
    }
    Json bps = Json::array();
    for (double x : f.knots()) {
        bps.push_back(x);
    }
    Json vals = Json::array();
    for (complex v : f.values()) {
        vals.push_back(complex_json(v));
    }
    j["breakpoints"] = std::move(bps);
    j["values"] = std::move(vals);
    j["l1_slack"] = f.l1_slack().value();
    return j;
}

PLFunction pl_from_json(const Json& j)
{
    const Json& bps = field(j, "breakpoints");
    const Json& vals = field(j, "values");
    if (!bps.is_array() || !vals.is_array()) {
        bad("\"breakpoints\" and \"values\" must be arrays");
    }
    std::vector<double> x;
    x.reserve(bps.size());
    for (const Json& b : bps) {
        x.push_back(number(b, "breakpoints"));
    }
    std::vector<complex> v;
    v.reserve(vals.size());
    for (const Json& c : vals) {
        v.push_back(complex_from(c));
    }
    const double origin = j.contains("origin") ? number_field(j, "origin") : 0.0;
    const CertUpper slack = j.contains("l1_slack") ? bound_field(j, "l1_slack") : CertUpper{};
    return PLFunction::from_local(origin, std::move(x), std::move(v), slack);
}

Json to_json(const InversionCertificate& c)
{
    Json j = Json::object();
    j["witness"] = to_json(c.witness);
    j["residual"] = c.residual.value();
    Json p = Json::object();
    p["grid"] = c.params.grid;
    p["degree"] = c.params.degree;
    p["target"] = c.params.target;
    j["params"] = std::move(p);
    return j;
}

InversionCertificate certificate_from_json(const Json& j)
{
    InversionCertificate c;
    c.witness = l1z_from_json(field(j, "witness"));
    c.residual = bound_field(j, "residual");
    const Json& p = field(j, "params");
    c.params.grid = size_field(p, "grid");
    c.params.degree = size_field(p, "degree");
    c.params.target = number_field(p, "target");
    return c;
}

bool is_pl_json(const Json& j)
{
    return j.is_object() && j.contains("breakpoints");
}

Json parse_json(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        bad("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

} // namespace wiener
