// End-to-end checks of the command-line tool: exit codes, file formats,
// and determinism of the emitted data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "odr_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run_cli(const std::string& args) {
  const fs::path out_file = work_dir() / "stdout.txt";
  const fs::path err_file = work_dir() / "stderr.txt";
  const std::string cmd = std::string(ODR_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(out_file), slurp(err_file)};
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text,
                                                std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::string kFig3Config = R"({
  "alpha_sq": 0.21, "beta_sq": 0.59, "eta": 0.91, "nu": 0.003,
  "xi": 0.993, "n_trials": 2000, "seed": 7
})";

}  // namespace

TEST_CASE("cli curves") {
  const fs::path csv = work_dir() / "curves.csv";

  SUBCASE("default curve set with ordered columns") {
    const CliRun r =
        run_cli("curves --lo 0.1 --hi 0.4 --steps 4 --out " + csv.string());
    CHECK(r.exit_code == 0);
    std::string header;
    const auto rows = parse_csv_rows(slurp(csv), &header);
    CHECK(header ==
          "alpha_sq,ql_bpsk,ql_ook,sql,sql_eta,odr_ideal,odr_model,kennedy");
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
      REQUIRE(row.size() == 8);
      const double ql_bpsk = row[1], ql_ook = row[2], sql = row[3],
                   sql_eta = row[4], odr_ideal = row[5], odr_model = row[6];
      CHECK(ql_bpsk < odr_ideal);
      CHECK(odr_ideal < sql);
      CHECK(ql_ook > ql_bpsk);
      CHECK(odr_model < sql_eta);
    }
    CHECK(rows.front()[0] == 0.1);
    CHECK(rows.back()[0] == 0.4);
  }

  SUBCASE("single homodyne-limit column at the reference amplitude") {
    const CliRun r = run_cli("curves --curves sql --lo 0.21 --hi 0.22 "
                             "--steps 2 --out " +
                             csv.string());
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv_rows(slurp(csv), nullptr);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == 0.21);
    CHECK(std::abs(rows[0][1] - 0.17973) <= 1e-4);
  }

  SUBCASE("identical reruns are byte-identical") {
    const fs::path again = work_dir() / "curves2.csv";
    run_cli("curves --lo 0.1 --hi 0.4 --steps 4 --out " + csv.string());
    run_cli("curves --lo 0.1 --hi 0.4 --steps 4 --out " + again.string());
    CHECK(slurp(csv) == slurp(again));
  }

  SUBCASE("usage errors exit 2") {
    CHECK(run_cli("curves --lo 0.5 --hi 0.1 --out " + csv.string()).exit_code ==
          2);
    CHECK(run_cli("curves --steps 1 --out " + csv.string()).exit_code == 2);
    CHECK(run_cli("curves --curves nosuch --out " + csv.string()).exit_code ==
          2);
    CHECK(run_cli("curves --out /nonexistent-dir/x.csv").exit_code == 2);
  }
}

TEST_CASE("cli simulate") {
  const fs::path cfg = write_file("fig3.json", kFig3Config);
  const fs::path out = work_dir() / "result.json";

  SUBCASE("result document carries the contract fields") {
    const CliRun r = run_cli("simulate --config " + cfg.string() +
                             " --no-timestamp --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ber = ") != std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc.size() == 5);
    CHECK(doc.at("n_trials") == 2000);
    CHECK(doc.at("seed") == 7);
    CHECK(doc.at("provenance") == "monte-carlo");
    const double ber = doc.at("ber").get<double>();
    CHECK(ber > 0.10);
    CHECK(ber < 0.25);
  }

  SUBCASE("reruns are byte-identical; timestamps are opt-out") {
    const fs::path again = work_dir() / "result2.json";
    run_cli("simulate --config " + cfg.string() + " --no-timestamp --out " +
            out.string());
    run_cli("simulate --config " + cfg.string() + " --no-timestamp --out " +
            again.string());
    CHECK(slurp(out) == slurp(again));

    run_cli("simulate --config " + cfg.string() + " --out " + out.string());
    CHECK(nlohmann::json::parse(slurp(out)).contains("timestamp"));
  }

  SUBCASE("seed override is recorded") {
    run_cli("simulate --seed 9 --config " + cfg.string() + " --no-timestamp "
            "--out " + out.string());
    CHECK(nlohmann::json::parse(slurp(out)).at("seed") == 9);
  }

  SUBCASE("thread count never changes the data") {
    const fs::path one = work_dir() / "threads1.json";
    const fs::path four = work_dir() / "threads4.json";
    run_cli("simulate --threads 1 --config " + cfg.string() +
            " --no-timestamp --out " + one.string());
    run_cli("simulate --threads 4 --config " + cfg.string() +
            " --no-timestamp --out " + four.string());
    CHECK(slurp(one) == slurp(four));
  }

  SUBCASE("single-trial run yields a one-sample estimate") {
    const fs::path tiny = write_file(
        "tiny.json", R"({"alpha_sq": 0.21, "beta_sq": 0.59, "n_trials": 1})");
    const CliRun r = run_cli("simulate --config " + tiny.string() +
                             " --no-timestamp --out " + out.string());
    CHECK(r.exit_code == 0);
    const double ber = nlohmann::json::parse(slurp(out)).at("ber").get<double>();
    CHECK((ber == 0.0 || ber == 1.0));
  }

  SUBCASE("trial records") {
    const fs::path trials = work_dir() / "trials.csv";
    const CliRun r = run_cli("simulate --config " + cfg.string() +
                             " --trials-out " + trials.string());
    CHECK(r.exit_code == 0);
    std::istringstream in(slurp(trials));
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,true_bit,photons,height_ev,decided_bit");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2000);
  }

  SUBCASE("config diagnostics exit 2 and name the field") {
    const fs::path bad_eta = write_file(
        "bad_eta.json", R"({"alpha_sq": 0.21, "beta_sq": 0.5, "eta": 1.2})");
    CliRun r = run_cli("simulate --config " + bad_eta.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("eta") != std::string::npos);

    const fs::path typo = write_file(
        "typo.json", R"({"alpha_sq": 0.21, "beta_sq": 0.5, "tes_enable": 1})");
    r = run_cli("simulate --config " + typo.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("tes_enable") != std::string::npos);

    const fs::path garbage = write_file("garbage.json", "not json at all");
    CHECK(run_cli("simulate --config " + garbage.string()).exit_code == 2);
    CHECK(run_cli("simulate --config /missing.json").exit_code == 2);
  }
}

TEST_CASE("cli sweep") {
  const fs::path cfg = write_file("fig3.json", kFig3Config);
  const fs::path out = work_dir() / "sweep.csv";
  const CliRun r = run_cli("sweep --config " + cfg.string() +
                           " --beta-lo 0.4 --beta-hi 0.8 --steps 3 --out " +
                           out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("min ber") != std::string::npos);
  std::string header;
  const auto rows = parse_csv_rows(slurp(out), &header);
  CHECK(header == "beta_sq,ber,stderr");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == 0.4);
  CHECK(rows[2][0] == 0.8);
}

TEST_CASE("cli histogram") {
  const fs::path tes_cfg = write_file("tes.json", R"({
    "alpha_sq": 0.21, "beta_sq": 0.59, "eta": 0.91, "nu": 0.003,
    "xi": 0.993, "n_trials": 3000, "seed": 5, "tes_enabled": true
  })");
  const fs::path out = work_dir() / "hist.csv";
  const CliRun r = run_cli("histogram --config " + tes_cfg.string() +
                           " --bins 90 --out " + out.string());
  CHECK(r.exit_code == 0);
  std::string header;
  const auto rows = parse_csv_rows(slurp(out), &header);
  CHECK(header == "bin_lo_ev,bin_hi_ev,count_plus,count_minus");
  REQUIRE(rows.size() == 90);
  double total = 0.0;
  for (const auto& row : rows) total += row[2] + row[3];
  CHECK(total == 3000);

  const fs::path plain = write_file("plain.json", kFig3Config);
  CHECK(run_cli("histogram --config " + plain.string() + " --out " +
                out.string())
            .exit_code == 2);
}

TEST_CASE("cli lock") {
  const fs::path out = work_dir() / "trace.csv";
  const CliRun r = run_cli("lock --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("residual") != std::string::npos);
  std::string header;
  const auto rows = parse_csv_rows(slurp(out), &header);
  CHECK(header == "window_index,theta_rad,clicks,correction_rad");
  CHECK(rows.size() == 10000);

  SUBCASE("lock loss exits 3") {
    const fs::path diverged = write_file("diverged.json", R"({
      "initial_offset_rad": 3.2, "drift_std_rad": 0.0,
      "kp": 0.0, "ki": 0.0, "n_windows": 100, "settle_windows": 0
    })");
    const CliRun loss = run_cli("lock --config " + diverged.string());
    CHECK(loss.exit_code == 3);
  }

  SUBCASE("unknown config fields exit 2") {
    const fs::path bad = write_file("badlock.json", R"({"gain": 1.0})");
    CHECK(run_cli("lock --config " + bad.string()).exit_code == 2);
  }
}

TEST_CASE("cli usage") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);          // missing subcommand
  CHECK(run_cli("nosuchcmd").exit_code == 2);
}
