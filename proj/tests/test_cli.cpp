#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end runs of the installed binary; ALIQUOT_BIN comes from CMake.

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(ALIQUOT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

}  // namespace

TEST_CASE("sieve emits the documented csv with exact rows") {
  auto r = run("sieve --limit 12");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("n,sigma,s,S_sigma,S_s,phi\n") == 0);
  CHECK(r.output.find("12,28,16,55,27,4\n") != std::string::npos);
  // 12 data rows + header
  int lines = 0;
  for (char c : r.output)
    if (c == '\n') ++lines;
  CHECK(lines == 13);
}

TEST_CASE("byte-identical output across repeated runs") {
  for (const char* cmd : {"sieve --limit 200 --lo 50", "edf --limit 500 --grid 0:2:0.25",
                          "mean --checkpoints 100,1000", "dense --target 4/3 --eps 1e-3",
                          "series --fn log-sigma-ratio --limit 1e4",
                          "moments --k 1 --limit 1000 --euler-primes 1000"}) {
    auto a = run(cmd);
    auto b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
  }
}

TEST_CASE("scientific notation accepted for numeric flags") {
  auto r = run("sieve --limit 1e2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("100,217,117,") != std::string::npos);  // sigma(100) = 217
}

TEST_CASE("dense then verify round trip") {
  std::string cert = "cli_cert_roundtrip.json";
  auto w = run("dense --target 1 --eps 0.25 --out " + cert);
  CHECK(w.exit_code == 0);
  auto v = run("verify --cert " + cert);
  CHECK(v.exit_code == 0);
  CHECK(v.output.find("certificate OK") != std::string::npos);
  std::remove(cert.c_str());

  // tight tolerance: the serialized rationals run to ~80 digits
  auto w2 = run("dense --target 2718281828/1000000000 --eps 1e-6 --out " + cert);
  CHECK(w2.exit_code == 0);
  auto v2 = run("verify --cert " + cert);
  CHECK(v2.exit_code == 0);
  std::remove(cert.c_str());
}

TEST_CASE("verify rejects a tampered certificate with exit 1") {
  std::string cert = "cli_cert_tampered.json";
  auto w = run("dense --target 1 --eps 0.125 --out " + cert);
  CHECK(w.exit_code == 0);
  std::ifstream in(cert);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  auto pos = text.find("\"q\": \"7\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 8, "\"q\": \"9\"");
  std::ofstream(cert) << text;
  auto v = run("verify --cert " + cert);
  CHECK(v.exit_code == 1);
  CHECK(v.output.find("not prime") != std::string::npos);
  std::remove(cert.c_str());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("sieve").exit_code == 2);                      // missing --limit
  CHECK(run("sieve --limit 10 --bogus 1").exit_code == 2); // unknown flag
  CHECK(run("sieve --limit 1.5").exit_code == 2);          // fractional count
  CHECK(run("dense --target -1 --eps 0.1").exit_code == 2);
  CHECK(run("edf --limit 10 --grid nonsense").exit_code == 2);
}

TEST_CASE("zero target routes to the single-prime certificate") {
  auto r = run("dense --target 0 --eps 0.1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"11\"") != std::string::npos);
  CHECK(r.output.find("\"steps\": []") != std::string::npos);
}

TEST_CASE("help documents the emitted schemas") {
  auto mean_help = run("mean --help");
  CHECK(mean_help.exit_code == 0);
  CHECK(mean_help.output.find("x,statistic,partial_sum,mean,limit,normalized_error") !=
        std::string::npos);
  auto sieve_help = run("sieve --help");
  CHECK(sieve_help.output.find("n,sigma,s,S_sigma,S_s,phi") != std::string::npos);
  auto moments_help = run("moments --help");
  CHECK(moments_help.output.find("k,mu_k,log_ratio,carleman,mu_phi_2k") != std::string::npos);
  auto series_help = run("series --help");
  CHECK(series_help.output.find("series,prime_bound,partial_sum,trend") != std::string::npos);
}

TEST_CASE("moments json report") {
  auto r = run("moments --k 2 --limit 1e4 --euler-primes 1e4 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"k\": 2") != std::string::npos);
  CHECK(r.output.find("\"truncation\"") != std::string::npos);
  auto g = run("moments --kmax 5 --limit 1e4");
  CHECK(g.exit_code == 0);
  CHECK(g.output.find("k,mu_k,log_ratio,carleman,mu_phi_2k,phi_bound_ok,stability\n") == 0);
}

TEST_CASE("edf ks mode") {
  auto r = run("edf --limit 1000 --ks-limit 2000");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("n1,n2,distance\n") == 0);
  CHECK(r.output.find("1000,2000,") != std::string::npos);
}
