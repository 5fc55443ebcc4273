#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hypercluster/pointset.hpp"

#include "temp_dir.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    const std::string cmd = std::string(HYPERCLUSTER_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const fs::path& p)
{
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        n += line.empty() ? 0 : 1;
    }
    return n;
}

std::size_t count_of(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

std::string q(const fs::path& p)
{
    return "'" + p.string() + "'";
}

} // namespace

TEST_CASE("synth writes the requested samples reproducibly")
{
    TempDir dir;
    const auto a = dir / "a.jsonl";
    const auto b = dir / "b.jsonl";
    CHECK(run("synth --classes 1,4 --per-class 100 --seed 3 --out " + q(a)) == 0);
    CHECK(run("synth --classes 1,4 --per-class 100 --seed 3 --out " + q(b)) == 0);
    CHECK(count_lines(a) == 200);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::exists(dir / "a.jsonl.config.toml"));

    // Refuses to overwrite, then honours --force.
    CHECK(run("synth --classes 1,4 --per-class 5 --seed 3 --out " + q(a)) == 2);
    CHECK(count_lines(a) == 200);
    CHECK(run("synth --classes 1,4 --per-class 5 --seed 3 --out " + q(a) + " --force") == 0);
    CHECK(count_lines(a) == 10);

    CHECK(run("synth --classes 1,1 --out " + q(dir / "dup.jsonl")) == 2);
    CHECK(run("synth --per-class 3 --i-range 10,5 --out " + q(dir / "bad.jsonl")) == 2);
    CHECK(run("synth --bogus --out " + q(dir / "x.jsonl")) == 2);
}

TEST_CASE("config file values apply and flags override them")
{
    TempDir dir;
    {
        std::ofstream cfg(dir / "run.toml");
        cfg << "[synth]\nclasses = [1.0, 4.0, 7.0]\nper-class = 4\nseed = 9\n";
    }
    CHECK(run("--config " + q(dir / "run.toml") + " synth --out " + q(dir / "a.jsonl")) == 0);
    CHECK(count_lines(dir / "a.jsonl") == 12);
    CHECK(run("--config " + q(dir / "run.toml") + " synth --per-class 2 --out " + q(dir / "b.jsonl")) == 0);
    CHECK(count_lines(dir / "b.jsonl") == 6);
    // The snapshot reproduces the run.
    CHECK(run("--config " + q(dir / "b.jsonl.config.toml") + " synth --out " + q(dir / "c.jsonl")) == 0);
    CHECK(slurp(dir / "b.jsonl") == slurp(dir / "c.jsonl"));

    {
        std::ofstream bad(dir / "bad.toml");
        bad << "[synth\nper-class = ";
    }
    CHECK(run("--config " + q(dir / "bad.toml") + " synth --out " + q(dir / "d.jsonl")) == 3);
}

TEST_CASE("train, embed, cluster, eval and project end to end")
{
    TempDir dir;
    const auto data = dir / "data.jsonl";
    REQUIRE(run("synth --classes 1,4 --per-class 12 --i-range 64,64 --seed 1 --out " + q(data)) == 0);

    const std::string train = "train --data " + q(data) + " --r-train 16,32 --epochs 2 --batch 8 --seed 5 --quiet";
    CHECK(run(train + " --out-dir " + q(dir / "m1")) == 0);
    CHECK(run(train + " --out-dir " + q(dir / "m2")) == 0);
    CHECK(fs::exists(dir / "m1" / "trace.csv"));
    CHECK(fs::exists(dir / "m1" / "config.toml"));
    CHECK(slurp(dir / "m1" / "model.fhnc") == slurp(dir / "m2" / "model.fhnc"));
    CHECK(run(train + " --out-dir " + q(dir / "m1")) == 2);
    CHECK(run("train --data " + q(data) + " --r-train= --out-dir " + q(dir / "m3")) == 2);
    CHECK(run("train --data " + q(dir / "missing.jsonl") + " --out-dir " + q(dir / "m4")) == 3);

    const auto model = q(dir / "m1" / "model.fhnc");
    CHECK(run("embed --model " + model + " --data " + q(data) + " --resolution 48 --out-dir " + q(dir / "e")) == 0);
    CHECK(count_lines(dir / "e" / "embeddings.csv") == 25);

    const auto emb = q(dir / "e" / "embeddings.csv");
    CHECK(run("cluster --embeddings " + emb + " --algo gmm --k 2 --out-dir " + q(dir / "c")) == 0);
    CHECK(count_lines(dir / "c" / "partition.csv") == 25);
    CHECK(run("cluster --embeddings " + emb + " --k 25 --out-dir " + q(dir / "c25")) == 2);
    CHECK(run("cluster --embeddings " + emb + " --algo dbscan --out-dir " + q(dir / "cx")) == 2);

    CHECK(run("eval --model " + model + " --data " + q(data) +
              " --seen 16,32 --held-out 64 --seeds 2 --pixel-baseline 32 --out-dir " + q(dir / "ev")) == 0);
    const std::string report = slurp(dir / "ev" / "report.csv");
    CHECK(report.rfind("resolution,split,algorithm,metric,mean,std,seeds\n", 0) == 0);
    CHECK(count_lines(dir / "ev" / "report.csv") == 1 + 3 * 2 * 2 + 2);

    CHECK(run("project --model " + model + " --data " + q(data) + " --resolutions 16,64 --out-dir " +
              q(dir / "p")) == 0);
    const std::string svg = slurp(dir / "p" / "projection.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_of(svg, "class=\"pt\"") == 2 * 24);
    CHECK(count_lines(dir / "p" / "projection.csv") == 1 + 2 * 24);
}

TEST_CASE("ingest-mnist reports a bad path with a data error")
{
    TempDir dir;
    CHECK(run("ingest-mnist --mnist-dir " + q(dir / "nowhere") + " --out " + q(dir / "m.jsonl")) == 3);
    CHECK_FALSE(fs::exists(dir / "m.jsonl"));
}

TEST_CASE("ingest-mnist subsets the bundled digits")
{
    const fs::path mnist = fs::path(HYPERCLUSTER_SOURCE_DIR) / "data" / "mnist";
    if (!fs::exists(mnist / "train-images-idx3-ubyte")) {
        MESSAGE("bundled MNIST files not present; skipping");
        return;
    }
    TempDir dir;
    CHECK(run("ingest-mnist --mnist-dir " + q(mnist) + " --subset 100 --seed 2 --out " + q(dir / "m.jsonl")) == 0);
    CHECK(count_lines(dir / "m.jsonl") == 100);
    const hypercluster::Dataset ds = hypercluster::read_jsonl(dir / "m.jsonl");
    CHECK(ds.samples.front().obs.count() == 784);
    CHECK(run("ingest-mnist --mnist-dir " + q(mnist) + " --subset 10 --classes 3,7 --resolution 14 --out " +
              q(dir / "s.jsonl")) == 0);
    const hypercluster::Dataset small = hypercluster::read_jsonl(dir / "s.jsonl");
    CHECK(small.size() == 10);
    for (const auto& s : small.samples) {
        CHECK((*s.label == 3 || *s.label == 7));
        CHECK(s.obs.count() == 196);
    }
}
