// End-to-end tests that drive the installed CLI binary through a shell.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("docgroup_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DOCGROUP_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kToyCorpus =
    "{\"id\":\"d1\",\"text\":\"alpha beta\",\"group\":\"g1\"}\n"
    "{\"id\":\"d2\",\"text\":\"gamma delta\",\"group\":\"g1\"}\n"
    "{\"id\":\"d3\",\"text\":\"alpha gamma\",\"group\":\"g2\"}\n";

const char* kToyLabels = "doc_id,criterion_id\nd1,c1\nd2,c2\nd3,c1\n";

}  // namespace

TEST_CASE("build emits the expected toy graph TSV byte for byte") {
  TempDir dir;
  write_file(dir.file("corpus.jsonl"), kToyCorpus);
  write_file(dir.file("labels.csv"), kToyLabels);
  const int rc = run_cli("build --input " + dir.file("corpus.jsonl") + " --labels " +
                         dir.file("labels.csv") + " --output " + dir.file("graph.tsv"));
  REQUIRE(rc == 0);
  CHECK(read_file(dir.file("graph.tsv")) ==
        "#weight_mode=doc_count\n"
        "p:g1\tc:c1\t1\n"
        "p:g1\tc:c2\t1\n"
        "p:g2\tc:c1\t1\n");

  SUBCASE("reruns are byte-identical") {
    const std::string first = read_file(dir.file("graph.tsv"));
    REQUIRE(run_cli("build --input " + dir.file("corpus.jsonl") + " --labels " +
                    dir.file("labels.csv") + " --output " + dir.file("graph.tsv")) == 0);
    CHECK(read_file(dir.file("graph.tsv")) == first);
  }

  SUBCASE("dot export") {
    REQUIRE(run_cli("build --input " + dir.file("corpus.jsonl") + " --labels " +
                    dir.file("labels.csv") + " --format dot --output " +
                    dir.file("graph.dot")) == 0);
    CHECK(read_file(dir.file("graph.dot")).find("\"p:g1\" -- \"c:c1\"") != std::string::npos);
  }
}

TEST_CASE("build accepts a precomputed theta as the criteria source") {
  TempDir dir;
  write_file(dir.file("corpus.jsonl"), kToyCorpus);
  write_file(dir.file("theta.csv"),
             "doc_id,t1,t2\n"
             "d1,0.9,0.1\n"
             "d2,0.2,0.8\n"
             "d3,0.9,0.1\n");
  REQUIRE(run_cli("build --input " + dir.file("corpus.jsonl") + " --theta " +
                  dir.file("theta.csv") + " --output " + dir.file("graph.tsv")) == 0);
  CHECK(read_file(dir.file("graph.tsv")) ==
        "#weight_mode=doc_count\n"
        "p:g1\tc:t1\t1\n"
        "p:g1\tc:t2\t1\n"
        "p:g2\tc:t1\t1\n");

  // misaligned theta (wrong doc count) must fail cleanly
  write_file(dir.file("short.csv"), "doc_id,t1,t2\nd1,0.9,0.1\n");
  CHECK(run_cli("build --input " + dir.file("corpus.jsonl") + " --theta " +
                dir.file("short.csv") + " --output " + dir.file("graph2.tsv")) != 0);
  CHECK_FALSE(fs::exists(dir.file("graph2.tsv")));
}

TEST_CASE("sim subcommand queries rankings and exports the similarity graph") {
  TempDir dir;
  write_file(dir.file("graph.tsv"),
             "#weight_mode=doc_count\n"
             "p:g1\tc:c1\t2\n"
             "p:g1\tc:c2\t1\n"
             "p:g2\tc:c1\t4\n"
             "p:g2\tc:c2\t2\n"
             "p:g3\tc:c3\t5\n");
  REQUIRE(run_cli("sim --input " + dir.file("graph.tsv") + " --query g1 --top-n 2 --output " +
                  dir.file("ranked.csv")) == 0);
  CHECK(read_file(dir.file("ranked.csv")) == "node,score\ng2,1\ng3,0\n");

  REQUIRE(run_cli("sim --input " + dir.file("graph.tsv") + " --xi 0.5 --output " +
                  dir.file("sim.tsv")) == 0);
  CHECK(read_file(dir.file("sim.tsv")) ==
        "#weight_mode=similarity\n"
        "#xi=0.5\n"
        "p:g3\n"
        "p:g1\tp:g2\t1\n");

  // spearman cannot back a similarity graph
  CHECK(run_cli("sim --input " + dir.file("graph.tsv") + " --measure spearman --output " +
                dir.file("bad.tsv")) != 0);
  CHECK_FALSE(fs::exists(dir.file("bad.tsv")));
}

TEST_CASE("cluster builds the similarity graph when given a bipartite input") {
  TempDir dir;
  write_file(dir.file("graph.tsv"),
             "#weight_mode=doc_count\n"
             "p:g1\tc:c1\t2\n"
             "p:g1\tc:c2\t1\n"
             "p:g2\tc:c1\t4\n"
             "p:g2\tc:c2\t2\n"
             "p:g3\tc:c3\t5\n");
  REQUIRE(run_cli("cluster --input " + dir.file("graph.tsv") + " --xi 0.5 --seed 1 --output " +
                  dir.file("clusters.csv")) == 0);
  const std::string csv = read_file(dir.file("clusters.csv"));
  CHECK(csv.find("#modularity=") == 0);
  CHECK(csv.find("g1,0\ng2,0\ng3,1\n") != std::string::npos);
}

TEST_CASE("entropy subcommand sorts ascending with the weight mode header") {
  TempDir dir;
  write_file(dir.file("graph.tsv"),
             "#weight_mode=doc_count\n"
             "p:g1\tc:c1\t3\n"
             "p:g2\tc:c1\t1\n"
             "p:g2\tc:c2\t1\n"
             "p:g2\tc:c3\t1\n");
  REQUIRE(run_cli("entropy --input " + dir.file("graph.tsv") + " --side P --order asc --output " +
                  dir.file("entropy.csv")) == 0);
  CHECK(read_file(dir.file("entropy.csv")) ==
        "#weight_mode=doc_count\n"
        "node,entropy\n"
        "g1,0\n"
        "g2,1\n");
}

TEST_CASE("cluster recovers the two triangles with the brute-force modularity") {
  TempDir dir;
  write_file(dir.file("sim.tsv"),
             "#weight_mode=similarity\n"
             "#xi=0.5\n"
             "p:a1\tp:a2\t1\n"
             "p:a1\tp:a3\t1\n"
             "p:a2\tp:a3\t1\n"
             "p:b1\tp:b2\t1\n"
             "p:b1\tp:b3\t1\n"
             "p:b2\tp:b3\t1\n"
             "p:a3\tp:b1\t1\n");
  REQUIRE(run_cli("cluster --input " + dir.file("sim.tsv") + " --seed 3 --output " +
                  dir.file("clusters.csv")) == 0);
  const std::string csv = read_file(dir.file("clusters.csv"));
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  REQUIRE(header.rfind("#modularity=", 0) == 0);
  CHECK(std::abs(std::stod(header.substr(12)) - 5.0 / 14.0) < 1e-9);
  std::string columns;
  std::getline(in, columns);
  CHECK(columns == "node,cluster");
  std::map<std::string, std::string> clusters;
  std::string line;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    clusters[line.substr(0, comma)] = line.substr(comma + 1);
  }
  CHECK(clusters.at("a1") == clusters.at("a2"));
  CHECK(clusters.at("a1") == clusters.at("a3"));
  CHECK(clusters.at("b1") == clusters.at("b2"));
  CHECK(clusters.at("a1") != clusters.at("b1"));
}

TEST_CASE("trend subcommand emits the year series") {
  TempDir dir;
  write_file(dir.file("graph.tsv"),
             "#weight_mode=doc_count\n"
             "p:2000\tc:t1\t3\n"
             "p:2002\tc:t1\t1\n"
             "p:2002\tc:t2\t4\n");
  REQUIRE(run_cli("trend --input " + dir.file("graph.tsv") + " --topic t2 --output " +
                  dir.file("trend.csv")) == 0);
  CHECK(read_file(dir.file("trend.csv")) ==
        "year,weight,proportion\n"
        "2000,0,0\n"
        "2001,0,0\n"
        "2002,4,0.8\n");
}

TEST_CASE("pairs subcommand ranks by Hellinger similarity") {
  TempDir dir;
  write_file(dir.file("corpus.jsonl"), kToyCorpus);
  write_file(dir.file("theta.csv"),
             "doc_id,t1,t2\n"
             "d1,0.7,0.3\n"
             "d2,0.7,0.3\n"
             "d3,0.2,0.8\n");
  REQUIRE(run_cli("pairs --input " + dir.file("corpus.jsonl") + " --theta " +
                  dir.file("theta.csv") + " --strategy none --top-n 1 --output " +
                  dir.file("pairs.csv")) == 0);
  CHECK(read_file(dir.file("pairs.csv")) ==
        "doc_a,doc_b,score,block\n"
        "d1,d2,1,none\n");
}

TEST_CASE("eval-map scores rankings against judgments") {
  TempDir dir;
  write_file(dir.file("graph.tsv"),
             "#weight_mode=doc_count\n"
             "p:g1\tc:c1\t2\n"
             "p:g1\tc:c2\t1\n"
             "p:g2\tc:c1\t4\n"
             "p:g2\tc:c2\t2\n"
             "p:g3\tc:c3\t5\n");
  write_file(dir.file("judgments.csv"), "query_node,relevant_node\ng1,g2\n");
  const std::string cmd = std::string(DOCGROUP_CLI_PATH) + " eval-map --input " +
                          dir.file("graph.tsv") + " --judgments " + dir.file("judgments.csv") +
                          " --top-n 1 --output " + dir.file("ap.csv") + " > " +
                          dir.file("stdout.txt") + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(read_file(dir.file("stdout.txt")) == "MAP@1 = 1\n");
  CHECK(read_file(dir.file("ap.csv")) == "#map=1\nquery,ap\ng1,1\n");

  SUBCASE("judged nodes must exist in the graph") {
    write_file(dir.file("judgments.csv"), "query_node,relevant_node\ng1,missing\n");
    CHECK(run_cli("eval-map --input " + dir.file("graph.tsv") + " --judgments " +
                  dir.file("judgments.csv") + " --output " + dir.file("ap2.csv")) != 0);
    CHECK_FALSE(fs::exists(dir.file("ap2.csv")));
  }
}

TEST_CASE("fit is reproducible and honors the DOCGROUP_SEED fallback") {
  TempDir dir;
  write_file(dir.file("corpus.jsonl"), kToyCorpus);
  REQUIRE(run_cli("fit --input " + dir.file("corpus.jsonl") + " --k 2 --iterations 30 --seed 5"
                  " --output " + dir.file("theta_a.csv")) == 0);
  REQUIRE(run_cli("fit --input " + dir.file("corpus.jsonl") + " --k 2 --iterations 30 --seed 5"
                  " --output " + dir.file("theta_b.csv")) == 0);
  CHECK(read_file(dir.file("theta_a.csv")) == read_file(dir.file("theta_b.csv")));

  const std::string env_cmd = "DOCGROUP_SEED=5 " + std::string(DOCGROUP_CLI_PATH) + " fit --input " +
                              dir.file("corpus.jsonl") + " --k 2 --iterations 30 --output " +
                              dir.file("theta_env.csv") + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
  CHECK(read_file(dir.file("theta_env.csv")) == read_file(dir.file("theta_a.csv")));

  REQUIRE(run_cli("fit --input " + dir.file("corpus.jsonl") + " --k 2 --iterations 30 --seed 6"
                  " --output " + dir.file("theta_c.csv")) == 0);
  CHECK(read_file(dir.file("theta_c.csv")) != read_file(dir.file("theta_a.csv")));
}

TEST_CASE("fit optionally exports the topic-word matrix") {
  TempDir dir;
  write_file(dir.file("corpus.jsonl"), kToyCorpus);
  REQUIRE(run_cli("fit --input " + dir.file("corpus.jsonl") + " --k 2 --iterations 20 --seed 9"
                  " --output " + dir.file("theta.csv") + " --topic-word " +
                  dir.file("tw.csv")) == 0);
  const std::string tw = read_file(dir.file("tw.csv"));
  CHECK(tw.rfind("topic_id,w1,", 0) == 0);
  CHECK(tw.find("\nt1,") != std::string::npos);
  CHECK(tw.find("\nt2,") != std::string::npos);
}

TEST_CASE("pairs supports similar_groups blocking end to end") {
  TempDir dir;
  write_file(dir.file("corpus.jsonl"),
             "{\"id\":\"a1\",\"text\":\"alpha beta\",\"group\":\"ga\"}\n"
             "{\"id\":\"a2\",\"text\":\"alpha gamma\",\"group\":\"ga\"}\n"
             "{\"id\":\"b1\",\"text\":\"alpha beta\",\"group\":\"gb\"}\n"
             "{\"id\":\"b2\",\"text\":\"beta gamma\",\"group\":\"gb\"}\n");
  write_file(dir.file("theta.csv"),
             "doc_id,t1,t2\n"
             "a1,0.8,0.2\n"
             "a2,0.7,0.3\n"
             "b1,0.8,0.2\n"
             "b2,0.6,0.4\n");
  REQUIRE(run_cli("pairs --input " + dir.file("corpus.jsonl") + " --theta " +
                  dir.file("theta.csv") + " --strategy similar_groups --xi 0.5 --top-n 1"
                  " --output " + dir.file("pairs.csv")) == 0);
  CHECK(read_file(dir.file("pairs.csv")) ==
        "doc_a,doc_b,score,block\n"
        "a1,b1,1,ga|gb\n");
}

TEST_CASE("failing runs exit nonzero and leave no partial outputs") {
  TempDir dir;
  write_file(dir.file("corpus.jsonl"), kToyCorpus);
  write_file(dir.file("labels.csv"), "doc_id,criterion_id\nd9,c1\n");
  CHECK(run_cli("build --input " + dir.file("corpus.jsonl") + " --labels " +
                dir.file("labels.csv") + " --output " + dir.file("graph.tsv")) != 0);
  CHECK_FALSE(fs::exists(dir.file("graph.tsv")));
  CHECK_FALSE(fs::exists(dir.file("graph.tsv") + ".tmp"));

  // unknown subcommand and missing required flags fail too
  CHECK(run_cli("frobnicate") != 0);
  CHECK(run_cli("build") != 0);
}
