#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "stadion/cli.hpp"

using nlohmann::json;
using stadion::cli::run_args;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "stadion");
    std::ostringstream out, err;
    Result r;
    r.code = run_args(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json load_schema(const std::string& name)
{
    std::ifstream f(std::string(STADION_SCHEMA_DIR) + "/" + name + ".schema.json");
    REQUIRE(f.good());
    return json::parse(f);
}

bool type_matches(const json& v, const std::string& t)
{
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

// The subset of JSON Schema the report schemas use.
void validate(const json& v, const json& s, const std::string& path, std::vector<std::string>& errs)
{
    if (s.contains("const") && v != s["const"])
        errs.push_back(path + ": const mismatch");
    if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end())
        errs.push_back(path + ": not in enum");
    if (s.contains("type")) {
        bool ok = false;
        if (s["type"].is_array()) {
            for (const auto& t : s["type"])
                ok |= type_matches(v, t.get<std::string>());
        } else {
            ok = type_matches(v, s["type"].get<std::string>());
        }
        if (!ok) {
            errs.push_back(path + ": wrong type");
            return;
        }
    }
    if (v.is_object()) {
        if (s.contains("required"))
            for (const auto& k : s["required"])
                if (!v.contains(k.get<std::string>()))
                    errs.push_back(path + ": missing " + k.get<std::string>());
        const json props = s.value("properties", json::object());
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (props.contains(it.key()))
                validate(it.value(), props[it.key()], path + "." + it.key(), errs);
            else if (s.value("additionalProperties", true) == false)
                errs.push_back(path + ": unexpected " + it.key());
        }
    }
    if (v.is_array() && s.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i)
            validate(v[i], s["items"], path + "[" + std::to_string(i) + "]", errs);
}

void check_schema(const std::string& text, const std::string& schema)
{
    const json doc = json::parse(text);
    std::vector<std::string> errs;
    validate(doc, load_schema(schema), "$", errs);
    for (const auto& e : errs)
        FAIL_CHECK(e);
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("validator rejects malformed documents")
{
    std::vector<std::string> errs;
    json bad = json::parse(R"({"schema_version":"1","command":"classify","inputs":{},"extra":1})");
    validate(bad, load_schema("classify"), "$", errs);
    CHECK(errs.size() >= 3);
}

TEST_CASE("orbit report")
{
    const Result r = run({"orbit", "--n", "0", "--a", "1.5", "--h", "0.5"});
    REQUIRE(r.code == 0);
    check_schema(r.out, "orbit");
    const json j = json::parse(r.out);
    CHECK(j["period"] == 4);
    CHECK(j["impacts"].size() == 4);
    CHECK(j["class"] == "Elliptic");
    CHECK(j["half_trace"].get<double>() == doctest::Approx(4 * j["delta"].get<double>() - 2).epsilon(1e-8));
}

TEST_CASE("anchor through the command line")
{
    const Result r = run({"classify", "--n", "0", "--a", "1.4142135623730951", "--h", "1"});
    REQUIRE(r.code == 0);
    check_schema(r.out, "classify");
    const json j = json::parse(r.out);
    CHECK(j["delta"].get<double>() == doctest::Approx(1.0));
    CHECK(j["class"] == "Parabolic");
    const Result h = run({"classify", "--n", "0", "--a", "1.41421356", "--h", "1"});
    CHECK(json::parse(h.out)["class"] == "Hyperbolic");
}

TEST_CASE("twist report")
{
    const Result r = run({"twist", "--n", "0", "--a", "1.2", "--h", "0.3"});
    REQUIRE(r.code == 0);
    check_schema(r.out, "twist");
    const json j = json::parse(r.out);
    CHECK(j["verdict"] == "IslandCertified");
    CHECK(j["taus"][0].get<double>() == doctest::Approx(j["tau1_oracle"].get<double>()).epsilon(1e-3));

    const Result s = run({"twist", "--n", "0", "--a", "1.2", "--h-min", "0.1", "--h-max", "0.5", "--steps", "3",
                          "--no-oracle"});
    REQUIRE(s.code == 0);
    CHECK(first_line(s.out) ==
          "h,delta,class,verdict,q,tau1,tau2,tau1_noise,tau1_oracle,rotation_number,residual_imag,error");
    CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 4);
}

TEST_CASE("error reports and exit codes")
{
    const Result e = run({"orbit", "--n", "3", "--a", "2.5", "--h", "0.1"});
    CHECK(e.code == 5);
    check_schema(e.out, "error");
    CHECK(json::parse(e.out)["error"]["code"] == "ExistenceError");
    CHECK(e.err.find("ExistenceError") != std::string::npos);

    const Result n = run({"twist", "--n", "0", "--a", "1.4142135623730951", "--h", "1.5"});
    CHECK(n.code == 11);
    check_schema(n.out, "error");

    const Result d = run({"orbit", "--n", "0", "--a", "0.5", "--h", "1"});
    CHECK(d.code == 2);

    CHECK(run({"orbit", "--a", "1.5"}).code != 0);
    CHECK(run({"nonsense"}).code != 0);
}

TEST_CASE("table headers")
{
    CHECK(first_line(run({"regions", "--n", "0", "--a-min", "1.2", "--a-max", "1.3", "--steps", "2", "--q", "3"}).out) ==
          "a,h_delta0,h_c2_3,h_c1_2,h_c1_3,h_delta1,error");
    CHECK(first_line(run({"resonances", "--q", "4"}).out) == "k,j,c");
    CHECK(first_line(run({"gaps", "--a", "1.6"}).out) == "n,h_delta0,h_delta1,strip_hi,nonempty,gap_lo,gap_hi");
    CHECK(first_line(run({"chaos-bound", "--a-min", "1.1", "--a-max", "1.3"}).out) == "a,H,n_max,argmax,error");
    CHECK(first_line(run({"level-curve", "--n", "0", "--c", "1", "--a-min", "1.1", "--a-max", "2"}).out) ==
          "a,h,error");
    CHECK(first_line(run({"portrait", "--a", "2", "--h", "2", "--seeds", "2", "--iters", "3"}).out) ==
          "seed,iterate,s,beta,stop");
}

TEST_CASE("level curve reproduces the anchor")
{
    const Result r = run({"level-curve", "--n", "0", "--c", "1", "--a-min", "2", "--a-max", "2", "--steps", "1"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string head, row;
    std::getline(in, head);
    std::getline(in, row);
    CHECK(row.rfind("2,1.73205081,", 0) == 0);
}

TEST_CASE("file output matches stdout and is reproducible")
{
    const auto path = std::filesystem::temp_directory_path() / "stadion_cli_test.csv";
    const std::vector<std::string> args{"portrait", "--a", "1.8", "--h", "1", "--seeds", "5", "--iters", "50"};
    const Result a = run(args);
    auto with_file = args;
    with_file.insert(with_file.end(), {"--workers", "3", "--out", path.string()});
    REQUIRE(run(with_file).code == 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == a.out);
}

}
