#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tgeo/cli/config.hpp"
#include "tgeo/cli/output.hpp"
#include "tgeo/cli/run.hpp"
#include "tgeo/error.hpp"

using namespace tgeo;
using namespace tgeo::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

// Fresh scratch directory, removed on scope exit.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& tag) {
        dir = fs::temp_directory_path() / ("tgeo_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(const std::string& sub, std::vector<std::string> overrides,
                const std::string& config = "") {
    std::ostringstream out, err;
    const int code = run({sub, config, std::move(overrides)}, out, err);
    return {code, out.str(), err.str()};
}

std::string dir_override(const fs::path& d) { return "output.directory=" + d.string(); }

// Walks the schema next to the defaults: same keys, compatible types.
void check_schema_node(const json& schema, const json& value, const std::string& key) {
    INFO("key " << key);
    const std::string type = schema.at("type");
    if (value.is_object()) {
        REQUIRE(type == "object");
        CHECK(schema.at("additionalProperties") == false);
        const json& props = schema.at("properties");
        CHECK(props.size() == value.size());
        for (const auto& [k, v] : value.items()) {
            REQUIRE(props.contains(k));
            check_schema_node(props.at(k), v, key.empty() ? k : key + "." + k);
        }
        return;
    }
    if (value.is_boolean()) CHECK(type == "boolean");
    if (value.is_number_unsigned()) CHECK(type == "integer");
    if (value.is_number_float()) CHECK(type == "number");
    if (value.is_string()) CHECK(type == "string");
    if (value.is_array()) CHECK(type == "array");
    CHECK(schema.at("default") == value);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("shipped default config and schema match the built-in defaults") {
    const fs::path root = TGEO_SOURCE_DIR;
    CHECK(load_config((root / "configs/default.json").string(), {}) == default_config());
    check_schema_node(read_json(root / "docs/config.schema.json"), default_config(), "");
    CHECK_NOTHROW(parse_config(default_config()));
}

TEST_CASE("merging rejects unknown keys and wrong types") {
    json cfg = default_config();
    CHECK_THROWS_AS(merge_config(cfg, json{{"geometry", {{"dd", 1.0}}}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json{{"extra", 1}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json{{"geometry", 1}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json{{"geometry", {{"d", "0.1"}}}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json{{"worldline", {{"steps", -3}}}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json{{"worldline", {{"steps", 2.5}}}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json{{"ensemble", {{"quantum", 1}}}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json{{"sigma", {{"p", {0, "a"}}}}}), ValidationError);
    CHECK_THROWS_AS(merge_config(cfg, json::array()), ValidationError);

    merge_config(cfg, json{{"geometry", {{"d", 1}}}, {"worldline", {{"steps", 7.0}}}});
    CHECK(cfg["geometry"]["d"].is_number_float());
    CHECK(cfg["geometry"]["d"] == 1.0);
    CHECK(cfg["worldline"]["steps"].is_number_unsigned());
    CHECK(cfg["worldline"]["steps"] == 7);
}

TEST_CASE("dotted overrides") {
    json cfg = default_config();
    apply_override(cfg, "geometry.kind=minkowski");
    apply_override(cfg, "ensemble.quantum=false");
    apply_override(cfg, "sigma.q=[2, 1, 0, 0]");
    apply_override(cfg, "output.directory=\"/tmp/a b\"");
    apply_override(cfg, "worldline.seed=42");
    CHECK(cfg["geometry"]["kind"] == "minkowski");
    CHECK(cfg["ensemble"]["quantum"] == false);
    CHECK(cfg["sigma"]["q"] == json{2.0, 1.0, 0.0, 0.0});
    CHECK(cfg["output"]["directory"] == "/tmp/a b");
    CHECK(cfg["worldline"]["seed"] == 42);
    CHECK_THROWS_AS(apply_override(cfg, "geometry.kind"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "=3"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "geometry..d=3"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "geometry.nope=3"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "geometry.d=abc"), ValidationError);
}

TEST_CASE("typed parsing validates values") {
    auto parse_with = [](const std::string& o) {
        json cfg = default_config();
        apply_override(cfg, o);
        return parse_config(cfg);
    };
    CHECK(parse_with("ensemble.solver=liouville").ensemble.solver == Solver::Liouville);
    CHECK(parse_with("geometry.ramp=smoothstep").geometry.profile.ramp == Ramp::SmoothStep);
    CHECK(parse_with("output.formats=[\"json\"]").output.csv == false);
    CHECK_THROWS_AS(parse_with("ensemble.solver=euler"), ValidationError);
    CHECK_THROWS_AS(parse_with("geometry.kind=riemann"), ValidationError);
    CHECK_THROWS_AS(parse_with("geometry.sigma0=0"), ValidationError);
    CHECK_THROWS_AS(parse_with("geometry.d=-0.1"), ValidationError);
    CHECK_THROWS_AS(parse_with("geometry.hbar=-1"), ValidationError);
    CHECK_THROWS_AS(parse_with("geometry.dimension=5"), ValidationError);
    CHECK_THROWS_AS(parse_with("geometry.dimension=3"), ValidationError);  // 4D points
    CHECK_THROWS_AS(parse_with("worldline.lines=0"), ValidationError);
    CHECK_THROWS_AS(parse_with("ensemble.x_hi=-8"), ValidationError);
    CHECK_THROWS_AS(parse_with("output.formats=[\"xml\"]"), ValidationError);

    json cfg = default_config();
    apply_override(cfg, "geometry.dimension=2");
    apply_override(cfg, "sigma.p=[0, 0]");
    apply_override(cfg, "sigma.q=[1, 0.5]");
    apply_override(cfg, "tube.p0=[0, 0]");
    apply_override(cfg, "tube.p1=[1, 0]");
    const ExperimentConfig ec = parse_config(cfg);
    CHECK(ec.geometry.world().dim() == 2);
    CHECK(ec.sigma.q[1] == 0.5);
}

TEST_CASE("config hash is canonical") {
    json a = default_config();
    json b = json::parse(a.dump(4));  // same content, different text
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 64);
    apply_override(b, "worldline.workers=8");
    apply_override(b, "output.directory=elsewhere");
    CHECK(config_hash(a) == config_hash(b));
    apply_override(b, "worldline.seed=2");
    CHECK(config_hash(a) != config_hash(b));
    // SHA-256 of "abc"
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("numbers are written with 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(6.02214076e23) == "6.0221407599999999e+23");
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -1e-310})
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);

    CsvWriter w({"a", "b"});
    const double row[] = {1.0, 0.5};
    w.row(row);
    CHECK(w.text() == "a,b\n1,0.5\n");
    const double bad[] = {1.0};
    CHECK_THROWS_AS(w.row(bad), ValidationError);
    const std::int64_t ints[] = {-3};
    const double rest[] = {2.0};
    w.row(ints, rest);
    CHECK(w.text() == "a,b\n1,0.5\n-3,2\n");
}

TEST_CASE("output sets commit atomically") {
    Scratch s("outset");
    OutputSet o;
    o.add("a.txt", "alpha");
    o.add("b.txt", "");
    CHECK_THROWS_AS(o.add("a.txt", "again"), ValidationError);
    const auto files = o.commit(s.dir / "nested");
    REQUIRE(files.size() == 2);
    CHECK(files[0].name == "a.txt");
    CHECK(files[0].bytes == 5);
    CHECK(files[0].sha256 == sha256_hex("alpha"));
    CHECK(slurp(s.dir / "nested/a.txt") == "alpha");
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(s.dir / "nested")) names.insert(e.path().filename());
    CHECK(names == std::set<std::string>{"a.txt", "b.txt"});
}

TEST_CASE("constants reproduces the distortion constant") {
    Scratch s("constants");
    const Outcome r = run_cli("constants", {dir_override(s.dir)});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "d = 1.7577e-21 cm^2\n");
    const json c = read_json(s.dir / "constants.json");
    CHECK(c["d"] == doctest::Approx(1.0546e-27 / (2.0 * 1e-17 * 3e10)).epsilon(1e-15));
    CHECK(c["d_unit"] == "cm^2");

    const Outcome nat = run_cli("constants", {dir_override(s.dir), "geometry.units=natural",
                                              "geometry.hbar=2", "geometry.b=1", "geometry.c=1"});
    CHECK(nat.out == "d = 1\n");
}

TEST_CASE("failures write nothing and report one json line") {
    Scratch s("fail");
    const fs::path out = s.dir / "out";

    std::ofstream(s.dir / "broken.json") << "{\"geometry\": {\"d\": 0.1,}";
    Outcome r = run_cli("constants", {dir_override(out)}, (s.dir / "broken.json").string());
    CHECK(r.code == kExitValidation);
    CHECK(json::parse(r.err)["error"] == "validation");
    CHECK(r.err.find('\n') == r.err.size() - 1);
    CHECK_FALSE(fs::exists(out));

    r = run_cli("constants", {dir_override(out)}, (s.dir / "missing.json").string());
    CHECK(r.code == kExitValidation);
    r = run_cli("warp", {dir_override(out)});
    CHECK(r.code == kExitValidation);
    r = run_cli("ensemble", {dir_override(out), "ensemble.solver=liouville"});
    CHECK(r.code == kExitValidation);  // liouville needs quantum off
    CHECK_FALSE(fs::exists(out));

    // a narrow packet leaves most of the grid below the density floor
    r = run_cli("ensemble", {dir_override(out), "ensemble.sigma0=0.2", "ensemble.nx=256"});
    CHECK(r.code == kExitNumerical);
    CHECK(json::parse(r.err)["error"] == "numerical");
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("ensemble snapshots and the manifest") {
    Scratch s("ensemble");
    for (const char* solver : {"schrodinger", "hydro", "liouville"}) {
        const fs::path dir = s.dir / solver;
        std::vector<std::string> o = {dir_override(dir), std::string("ensemble.solver=") + solver,
                                      "ensemble.nx=256", "ensemble.np=128", "ensemble.t_end=0.25",
                                      "ensemble.n_outputs=2"};
        if (std::string(solver) == "liouville") o.push_back("ensemble.quantum=false");
        const Outcome r = run_cli("ensemble", o);
        INFO(solver << ": " << r.err);
        REQUIRE(r.code == kExitOk);

        const json summary = read_json(dir / "ensemble.json");
        CHECK(summary["times"].size() == 3);
        CHECK(summary["times"][2].get<double>() == doctest::Approx(0.25));
        CHECK(summary["mass_drift"].get<double>() < 1e-8);

        const std::string csv = slurp(dir / "ensemble_002.csv");
        const std::string header = csv.substr(0, csv.find('\n'));
        CHECK(header == (std::string(solver) == "schrodinger" ? "x,re,im" : "x,rho,phi"));
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 257);

        const json m = read_json(dir / "manifest.json");
        CHECK(m["subcommand"] == "ensemble");
        CHECK(m["artifact_version"] == kArtifactVersion);
        std::set<std::string> listed{"manifest.json"};
        for (const auto& f : m["files"]) {
            listed.insert(f["name"].get<std::string>());
            CHECK(f["sha256"] == sha256_hex(slurp(dir / f["name"].get<std::string>())));
        }
        std::set<std::string> present;
        for (const auto& e : fs::directory_iterator(dir)) present.insert(e.path().filename());
        CHECK(present == listed);
    }
}

TEST_CASE("worldline stats have exactly the published fields") {
    Scratch s("worldline");
    const Outcome r = run_cli("worldline", {dir_override(s.dir), "worldline.lines=20",
                                            "worldline.steps=5", "output.dump_lines=true"});
    REQUIRE(r.code == kExitOk);
    const json st = read_json(s.dir / "worldline_stats.json");
    std::set<std::string> keys;
    for (const auto& [k, v] : st.items()) keys.insert(k);
    CHECK(keys == std::set<std::string>{"mean_lateral", "cov", "slope", "r2", "n_lines", "n_steps"});
    CHECK(st["n_lines"] == 20);
    CHECK(st["n_steps"] == 5);
    CHECK(st["mean_lateral"].size() == 3);
    CHECK(st["cov"].size() == 3);
    const std::string csv = slurp(s.dir / "worldline_lines.csv");
    CHECK(csv.rfind("line,step,t,x,y,z\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 20 * 7);
    CHECK(read_json(s.dir / "manifest.json")["seed"] == 1);
}

TEST_CASE("tube and sigma outputs") {
    Scratch s("tube");
    Outcome r = run_cli("tube", {dir_override(s.dir)});
    REQUIRE(r.code == kExitOk);
    const json t = read_json(s.dir / "tube.json");
    CHECK(t["n_plus_distinct"].get<int>() >= 64);
    CHECK(t["diameter_plus"].get<double>() > 0.0);
    CHECK(t["max_residual_f2"].get<double>() < 1e-9 * t["f2_scale"].get<double>());
    const std::string csv = slurp(s.dir / "tube.csv");
    CHECK(csv.rfind("dir_index,branch,t,x,y,z,residual_F2,residual_sphere\n", 0) == 0);

    r = run_cli("sigma", {dir_override(s.dir), "geometry.kind=minkowski"});
    REQUIRE(r.code == kExitOk);
    const json sg = read_json(s.dir / "sigma.json");
    CHECK(sg["sigma"] == 0.375);  // (1 - 0.25) / 2
    CHECK(sg["distortion"] == 0.0);
}

TEST_CASE("the executable honours flags, the environment and exit codes") {
    Scratch s("exe");
    const std::string exe = TGEO_CLI_PATH;
    auto sh = [&](const std::string& cmd) {
        const int st = std::system(("cd " + s.dir.string() + " && " + cmd + " >out.txt 2>err.txt").c_str());
        return WEXITSTATUS(st);
    };
    CHECK(sh("TGEO_OUTPUT_DIR=envdir " + exe + " constants") == 0);
    CHECK(fs::exists(s.dir / "envdir/constants.json"));
    CHECK(sh(exe + " worldline --lines 4 --steps 3 --seed 9 --dump-lines --output-dir w") == 0);
    CHECK(read_json(s.dir / "w/manifest.json")["seed"] == 9);
    CHECK(fs::exists(s.dir / "w/worldline_lines.csv"));
    CHECK(sh(exe + " ensemble --solver schrodinger --nx 128 --t-end 0.1 --output-dir e") == 0);
    CHECK(sh(exe + " ensemble --solver liouville --quantum off --nx 64 --np 64 --t-end 0.1 "
                   "--output-dir l") == 0);
    CHECK(sh(exe + " ensemble --quantum maybe") == 1);
    CHECK(json::parse(slurp(s.dir / "err.txt"))["error"] == "validation");
    CHECK(sh(exe + " --set geometry.d=x constants") == 1);
    CHECK(sh(exe + " nosuch") == 1);
    CHECK(sh(exe) == 1);
    CHECK(sh(exe + " --help") == 0);
}

}  // TEST_SUITE
