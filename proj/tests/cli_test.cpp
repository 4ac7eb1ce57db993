// Runs the command-line tool as a subprocess.
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code;
  std::string out;
};

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "pierscour_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path out = workdir() / "stdout.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" PIERSCOUR_CLI "' " +
                          args + " > '" + out.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) v.push_back(l);
  return v;
}

const std::string kFixture = std::string(PIERSCOUR_TEST_DATA) + "/field_train_fixture.csv";

}  // namespace

TEST_CASE("synth is reproducible and validated") {
  REQUIRE(run("synth --n 232 --seed 42 --out a.csv").exit_code == 0);
  REQUIRE(run("synth --n 232 --seed 42 --out b.csv").exit_code == 0);
  const std::string a = slurp(workdir() / "a.csv");
  CHECK(a == slurp(workdir() / "b.csv"));
  CHECK(lines(a).size() == 233);
  CHECK(lines(a).front() == "ps,pw,skew,v,h,d50,sigma,scour");
  CHECK(fs::exists(workdir() / "a.csv.manifest"));

  CHECK(run("synth --n 1 --out c.csv").exit_code == 1);
  CHECK(run("synth --n 10 --out /nonexistent/dir/c.csv").exit_code == 2);
}

TEST_CASE("summarize") {
  const Run r = run("summarize --data '" + kFixture + "'");
  REQUIRE(r.exit_code == 0);
  bool found = false;
  for (const auto& l : lines(r.out)) {
    if (l.rfind("scour", 0) == 0) {
      found = true;
      CHECK(l.find("1.12") != std::string::npos);
      CHECK(l.find("1.27") != std::string::npos);
    }
  }
  CHECK(found);
  CHECK(run("summarize --data missing.csv").exit_code == 2);

  const Run j = run("--format json-lines summarize --data '" + kFixture + "'");
  REQUIRE(j.exit_code == 0);
  std::size_t records = 0;
  for (const auto& l : lines(j.out)) {
    const auto rec = nlohmann::json::parse(l);
    if (rec.value("column", "") == "scour") {
      CHECK(std::abs(rec["mean"].get<double>() - 1.12) <= 0.01);
      CHECK(std::abs(rec["std"].get<double>() - 1.27) <= 0.01);
    }
    ++records;
  }
  CHECK(records >= 8);

  fs::path bad = workdir() / "bad.csv";
  std::ofstream(bad) << "ps,pw,skew,v,h,d50,sigma,scour\n1,-1,0,1,1,1,1,1\n";
  const Run v = run("summarize --data bad.csv");
  CHECK(v.exit_code == 1);
  CHECK(v.out.find("pw > 0") != std::string::npos);
}

TEST_CASE("train is byte-for-byte deterministic") {
  REQUIRE(run("synth --n 80 --seed 3 --out t.csv").exit_code == 0);
  const std::string common = "train --data t.csv --n-train 60 --epochs 20 --history-interval 5 ";
  REQUIRE(run(common + "--out-model m1.psm --out-history h1.csv --out-predictions p1.csv")
              .exit_code == 0);
  REQUIRE(run(common + "--out-model m2.psm --out-history h2.csv --out-predictions p2.csv")
              .exit_code == 0);
  for (auto [a, b] : {std::pair{"m1.psm", "m2.psm"}, {"h1.csv", "h2.csv"}, {"p1.csv", "p2.csv"}}) {
    INFO(a);
    const std::string x = slurp(workdir() / a);
    CHECK(!x.empty());
    CHECK(x == slurp(workdir() / b));
  }
  CHECK(lines(slurp(workdir() / "h1.csv")).front() == "epoch,train_loss,val_rmse_m");
  CHECK(lines(slurp(workdir() / "p1.csv")).size() == 21);
  CHECK(fs::exists(workdir() / "m1.psm.manifest"));

  const std::string manifest = slurp(workdir() / "m1.psm.manifest");
  for (const char* key : {"command=train", "seed=42", "config.preset=dnn_paper",
                          "config.epochs=20", "updater_steps=240", "output.model=m1.psm"})
    CHECK(manifest.find(key) != std::string::npos);
}

TEST_CASE("train flags, environment seed, and errors") {
  REQUIRE(run("synth --n 80 --seed 3 --out t.csv").exit_code == 0);
  const std::string common = "train --data t.csv --n-train 60 --epochs 5 --preset bpnn_paper ";
  // The environment supplies the default for both the seed and the split seed.
  REQUIRE(run(common + "--seed 7 --split-seed 7 --out-model s7.psm").exit_code == 0);
  REQUIRE(run(common + "--out-model e7.psm", "PIERSCOUR_SEED=7").exit_code == 0);
  REQUIRE(run(common + "--seed 8 --out-model f8.psm", "PIERSCOUR_SEED=7").exit_code == 0);
  CHECK(slurp(workdir() / "s7.psm") == slurp(workdir() / "e7.psm"));
  CHECK(slurp(workdir() / "s7.psm") != slurp(workdir() / "f8.psm"));

  const Run j = run("--format json-lines " + common + "--out-model j.psm");
  REQUIRE(j.exit_code == 0);
  const auto recs = lines(j.out);
  REQUIRE(recs.size() == 1);
  const auto rec = nlohmann::json::parse(recs[0]);
  for (const char* k : {"cc", "rmse_m", "mae_m", "n"}) CHECK(rec.contains(k));
  CHECK(rec["n"] == 20);

  CHECK(run(common + "--dropout 1.5").exit_code == 1);
  CHECK(run(common + "--hidden 0").exit_code == 1);
  CHECK(run(common + "--n-train 80").exit_code == 1);
  CHECK(run("train --data missing.csv").exit_code == 2);
  CHECK(run("train --data t.csv --n-train 60 --epochs 50 --preset bpnn_paper --lr 1e9")
            .exit_code == 3);

  REQUIRE(run(common + "--out-model ev.psm").exit_code == 0);
  const Run ev = run("evaluate --model ev.psm --data t.csv --out-predictions ev.csv");
  CHECK(ev.exit_code == 0);
  CHECK(lines(slurp(workdir() / "ev.csv")).size() == 81);
  CHECK(run("evaluate --model nothing.psm --data t.csv").exit_code == 2);
}

TEST_CASE("compare layout") {
  REQUIRE(run("synth --n 80 --seed 3 --out t.csv").exit_code == 0);
  const Run r = run("compare --data t.csv --n-train 60 --dnn-epochs 3 --bpnn-epochs 20");
  REQUIRE(r.exit_code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].find("RMSE") != std::string::npos);
  CHECK(ls[0].find("MAE") != std::string::npos);
  CHECK(ls[0].find("CC") != std::string::npos);
  CHECK(ls[1].rfind("bpnn_paper", 0) == 0);
  CHECK(ls[2].rfind("dnn_paper", 0) == 0);
  CHECK(fs::exists(workdir() / "predictions_dnn.csv"));
  CHECK(fs::exists(workdir() / "predictions_bpnn.csv"));
  CHECK(fs::exists(workdir() / "compare.manifest"));

  const Run j = run("--format json-lines compare --data t.csv --n-train 60 --dnn-epochs 3 "
                    "--bpnn-epochs 20");
  REQUIRE(j.exit_code == 0);
  CHECK(lines(j.out).size() == 2);
  CHECK(run("compare --data missing.csv").exit_code == 2);
}

TEST_CASE("gradcheck exit codes") {
  const Run ok = run("gradcheck");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("layer 2 max relative error") != std::string::npos);
  CHECK(run("gradcheck --activation relu").exit_code == 0);
  CHECK(run("gradcheck --corrupt-backward").exit_code == 1);

  const Run j = run("--format json-lines gradcheck");
  REQUIRE(j.exit_code == 0);
  const auto rec = nlohmann::json::parse(lines(j.out).back());
  CHECK(rec["passed"] == true);
  CHECK(rec["layer_max_relative_error"].size() == 3);
}
