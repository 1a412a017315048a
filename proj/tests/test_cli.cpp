#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = TSC_CLI_PATH;

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "tsc_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help") == 0);
    CHECK(run("synth --help") == 0);
    CHECK(run("") == 2);
    CHECK(run("synth --bogus-flag 1") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("wavelet --input /nonexistent/data.tsc --out /tmp") == 1);
}

TEST_CASE("synth writes both formats deterministically") {
    fs::path dir = work_dir() / "synth";
    fs::remove_all(dir);

    std::string base = "synth --count 6 --channels 2 --length 256 --seed 3 --out " + dir.string();
    CHECK(run(base + " --name a") == 0);
    CHECK(run(base + " --name b") == 0);
    CHECK(slurp(dir / "a.tsc") == slurp(dir / "b.tsc"));

    CHECK(run(base + " --format csv --name c") == 0);
    std::string csv = slurp(dir / "c.csv");
    CHECK(csv.rfind("2,256,100", 0) == 0);
    int records = 0;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("rec", 0) == 0) ++records;
    CHECK(records == 6);
}

TEST_CASE("wavelet report has the shared schema") {
    fs::path dir = work_dir() / "wavelet";
    fs::remove_all(dir);

    CHECK(run("synth --count 5 --length 256 --seed 1 --out " + dir.string()) == 0);
    CHECK(run("wavelet --input " + (dir / "synth.tsc").string() +
              " --fractions 0.02,0.1 --method global --svg --out " + dir.string()) == 0);

    std::string csv = slurp(dir / "wavelet.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "dataset,method,kept_fraction,mse,regime");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        auto fields = split_csv_line(line);
        REQUIRE(fields.size() == 5);
        CHECK(fields[1] == "WaveletGlobal");
        CHECK(std::stod(fields[3]) >= 0.0);
        ++rows;
    }
    CHECK(rows == 12);

    std::string svg = slurp(dir / "wavelet.svg");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("config files feed flags and explicit flags win") {
    fs::path dir = work_dir() / "config";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::ofstream(dir / "cfg.json") << R"({"count": 4, "channels": 2, "length": 128, "seed": 9})";
    std::string cfg = (dir / "cfg.json").string();

    CHECK(run("synth --config " + cfg + " --format csv --out " + dir.string() + " --name byconf") ==
          0);
    std::string byconf = slurp(dir / "byconf.csv");
    CHECK(byconf.rfind("2,128,100", 0) == 0);

    CHECK(run("synth --config " + cfg + " --channels 1 --format csv --out " + dir.string() +
              " --name override") == 0);
    std::string overridden = slurp(dir / "override.csv");
    CHECK(overridden.rfind("1,128,100", 0) == 0);

    CHECK(run("synth --config " + (dir / "absent.json").string()) == 1);
    std::ofstream(dir / "broken.json") << "{oops";
    CHECK(run("synth --config " + (dir / "broken.json").string()) == 2);
    std::ofstream(dir / "unknown.json") << R"({"no-such-flag": 1})";
    CHECK(run("synth --config " + (dir / "unknown.json").string()) == 2);
}

TEST_CASE("preprocess applies the requested transforms") {
    fs::path dir = work_dir() / "preprocess";
    fs::remove_all(dir);

    CHECK(run("synth --count 4 --length 300 --seed 2 --out " + dir.string()) == 0);
    CHECK(run("preprocess --input " + (dir / "synth.tsc").string() +
              " --resample 50 --standardize --format csv --out " + dir.string()) == 0);
    std::string csv = slurp(dir / "preprocessed.csv");
    CHECK(csv.rfind("1,151,50", 0) == 0);
}

TEST_CASE("fpca sweep emits summary rows") {
    fs::path dir = work_dir() / "fpca";
    fs::remove_all(dir);

    CHECK(run("synth --count 8 --length 256 --seed 4 --out " + dir.string()) == 0);
    CHECK(run("fpca --input " + (dir / "synth.tsc").string() +
              " --fractions 0.01,0.05 --basis 2 --out " + dir.string()) == 0);

    std::string csv = slurp(dir / "fpca.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 2);
    CHECK(fs::exists(dir / "fpca-basis.csv"));
}

TEST_CASE("vae roundtrip through train, eval, and bench") {
    fs::path dir = work_dir() / "vae";
    fs::remove_all(dir);

    CHECK(run("synth --count 12 --channels 1 --length 256 --seed 6 --out " + dir.string()) == 0);
    std::string data = (dir / "synth.tsc").string();
    std::string model_flags =
        " --latent 4 --crop 64 --epochs 2 --batch 8 --val-fraction 0.25 --seed 5";

    CHECK(run("vae-train --input " + data + model_flags + " --out " + dir.string()) == 0);
    std::string model = (dir / "model.vae1").string();
    CHECK(fs::exists(model));

    CHECK(run("vae-eval --model " + model + " --input " + data + " --out " + dir.string()) == 0);
    std::string eval = slurp(dir / "eval.csv");
    CHECK(eval.find("VAE") != std::string::npos);

    CHECK(run("bench --input " + data + " --methods vae,oracle --fractions 0.0625 --checkpoint " +
              model + " --out " + dir.string()) == 0);
    std::string bench = slurp(dir / "bench.csv");
    std::istringstream lines(bench);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 2);

    CHECK(run("bench --input " + data + " --methods vae --fractions 0.5 --checkpoint " + model +
              " --out " + dir.string()) == 1);
}
