// Copyright 2026 The wpirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wpir/harness.h"

#include <arpa/inet.h>
#include <gtest/gtest.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpir/config.h"
#include "wpir/transport.h"
#include "wpir/wire.h"
#include "wpir/wpir.h"

namespace wpir {
namespace {

struct Rig {
  std::shared_ptr<const FileLibrary> library;
  std::vector<ServerStore> stores;
};

Rig MakeRig(const PirSetting& s, std::uint64_t seed) {
  Rig rig;
  rig.library = std::make_shared<const FileLibrary>(
      GenerateSessionLibrary(s, Field::Default(), seed));
  rig.stores = ProvisionServers(s, rig.library);
  return rig;
}

int NonEmpty(const RetrievalTranscript& t) {
  int n = 0;
  for (const auto& a : t.answers) n += !a.symbols.empty();
  return n;
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(SessionTest, BaseSchemeDownload) {
  const PirSetting s = PirSetting::Replicated(2, 2);
  const Rig rig = MakeRig(s, 3);
  InProcessTransport transport(rig.stores, Field::Default());
  for (int theta = 1; theta <= 2; ++theta) {
    const auto t = RunSession(s, theta, MPrimeDistribution::PointMass(2, 1), 11, transport,
                              *rig.library);
    EXPECT_EQ(t.download_bits(), 48u);
    EXPECT_EQ(t.theta, theta);
    EXPECT_GT(t.framing_bytes, 0u);
  }
}

TEST(SessionTest, CleanDownloads) {
  const PirSetting s = PirSetting::Replicated(3, 2);
  const Rig rig = MakeRig(s, 4);
  InProcessTransport transport(rig.stores, Field::Default());
  const auto t =
      RunSession(s, 2, MPrimeDistribution::PointMass(2, 0), 5, transport, *rig.library);
  EXPECT_EQ(t.download_bits(), 72u);
  EXPECT_EQ(NonEmpty(t), 1);

  const PirSetting mds = PirSetting::Mds(3, 2, 2);
  const Rig mrig = MakeRig(mds, 4);
  InProcessTransport mt(mrig.stores, Field::Default());
  const auto u =
      RunSession(mds, 1, MPrimeDistribution::PointMass(2, 0), 5, mt, *mrig.library);
  EXPECT_EQ(NonEmpty(u), 2);
  EXPECT_EQ(u.download_bits(), MinimumFileLength(mds) * 8);
}

TEST(SessionTest, FramingExcludesPayload) {
  const PirSetting s = PirSetting::Replicated(3, 2);
  const Rig rig = MakeRig(s, 4);
  InProcessTransport transport(rig.stores, Field::Default());
  const SessionOutcome out = ExecuteSession(s, 1, MPrimeDistribution::PointMass(2, 1), 8,
                                            transport, Field::Default());
  std::uint64_t expected = 0;
  for (std::size_t n = 0; n < out.transcript.queries.size(); ++n) {
    expected += Frame(EncodeQuery(out.transcript.queries[n], *Field::Default())).size();
    // Reply frame: length prefix plus the u32 symbol count.
    expected += kFrameHeaderBytes + 4;
  }
  EXPECT_EQ(out.transcript.framing_bytes, expected);
}

TEST(SessionTest, WrongTruthIsReported) {
  const PirSetting s = PirSetting::Replicated(2, 2);
  const Rig rig = MakeRig(s, 3);
  const FileLibrary other = GenerateSessionLibrary(s, Field::Default(), 4);
  InProcessTransport transport(rig.stores, Field::Default());
  EXPECT_THROW(
      RunSession(s, 1, MPrimeDistribution::PointMass(2, 1), 1, transport, other),
      DecodeMismatch);
}

TEST(SessionTest, ServerCountMustMatch) {
  const Rig rig = MakeRig(PirSetting::Replicated(2, 2), 3);
  InProcessTransport transport(rig.stores, Field::Default());
  EXPECT_THROW(ExecuteSession(PirSetting::Replicated(3, 2), 1,
                              MPrimeDistribution::PointMass(2, 1), 1, transport,
                              Field::Default()),
               std::invalid_argument);
}

TEST(ExperimentTest, EmpiricalRateNearAnalytic) {
  ExperimentConfig c;
  c.setting = PirSetting::Replicated(3, 2);
  c.dist = MPrimeDistribution::Parse("1/2,1/2");
  c.trials = 10000;
  c.seed = 7;
  c.metrics = {Metric::kMil, Metric::kMaxl};
  const ExperimentResult r = RunExperiment(c);
  EXPECT_EQ(r.analytic_rate, Rational(6, 7));
  EXPECT_NEAR(r.empirical_rate, 6.0 / 7, 0.01 * 6.0 / 7);
  EXPECT_EQ(r.trials.size(), 10000u);
  EXPECT_EQ(r.file_bits, 72u);
  ASSERT_EQ(r.leakage.size(), 2u);
  for (const auto& l : r.leakage) EXPECT_TRUE(l.Agrees()) << l.ToString();
}

TEST(ExperimentTest, PersistedResultsAreDeterministic) {
  const auto base = std::filesystem::temp_directory_path() / "wpirlab_harness_test";
  std::filesystem::remove_all(base);
  ExperimentConfig c;
  c.setting = PirSetting::Mds(3, 2, 2);
  c.dist = MPrimeDistribution::Parse("1/3,2/3");
  c.trials = 300;
  c.seed = 42;
  c.metrics = {Metric::kMil};
  c.leakage_method = Method::kMonteCarlo;
  c.leakage_samples = 2000;
  c.output_dir = (base / "a").string();
  RunExperiment(c);
  c.output_dir = (base / "b").string();
  c.threads = 3;
  RunExperiment(c);
  EXPECT_EQ(ReadFile(base / "a" / "trials.csv"), ReadFile(base / "b" / "trials.csv"));
  // Identical apart from the recorded thread count.
  auto ja = nlohmann::ordered_json::parse(ReadFile(base / "a" / "result.json"));
  auto jb = nlohmann::ordered_json::parse(ReadFile(base / "b" / "result.json"));
  EXPECT_EQ(ja["config"]["threads"], 1);
  EXPECT_EQ(jb["config"]["threads"], 3);
  ja["config"].erase("threads");
  jb["config"].erase("threads");
  EXPECT_EQ(ja, jb);
  EXPECT_EQ(ja["analytic_rate"], "9/13");
  EXPECT_EQ(ja["download_bits"].size(), 300u);
  const std::string csv = ReadFile(base / "a" / "trials.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trial,theta,m_prime,download_bits,framing_bytes");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 301);
  std::filesystem::remove_all(base);
}

TEST(ExperimentTest, InvalidConfigs) {
  ExperimentConfig c;
  c.trials = 0;
  EXPECT_THROW(RunExperiment(c), std::invalid_argument);
  c.trials = 1;
  c.threads = 0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c.threads = 1;
  c.dist = MPrimeDistribution::PointMass(3, 0);
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c.dist = MPrimeDistribution::PointMass(2, 0);
  c.setting = PirSetting::Mds(3, 2, 2);
  c.field = "prime:3";
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c.field = "gf2^2";
  c.setting = PirSetting::Replicated(3, 2);
  EXPECT_NO_THROW(c.Validate());
}

TEST(ConfigTest, ParsesAllKeys) {
  const ExperimentConfig c = ParseConfig(
      "# comment\n"
      "setting.variant = mds\n"
      "setting.N = 5\n"
      "setting.M = 2   # trailing\n"
      "setting.K = 3\n"
      "field = gf256\n"
      "dist.pmf = 1/2, 1/2\n"
      "trials = 25\n"
      "seed = 9\n"
      "threads = 2\n"
      "leakage.metrics = mil,maxl\n"
      "leakage.method = montecarlo\n"
      "leakage.samples = 500\n"
      "output.dir = out\n");
  EXPECT_EQ(c.setting, PirSetting::Mds(5, 3, 2));
  EXPECT_EQ(c.dist, MPrimeDistribution::Parse("1/2,1/2"));
  EXPECT_EQ(c.trials, 25u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.threads, 2);
  EXPECT_EQ(c.metrics, (std::vector<Metric>{Metric::kMil, Metric::kMaxl}));
  EXPECT_EQ(c.leakage_method, Method::kMonteCarlo);
  EXPECT_EQ(c.leakage_samples, 500u);
  EXPECT_EQ(c.output_dir, "out");
  const ExperimentConfig again = ParseConfig(FormatConfig(c));
  EXPECT_EQ(FormatConfig(again), FormatConfig(c));
}

TEST(ConfigTest, Defaults) {
  const ExperimentConfig c =
      ParseConfig("setting.variant = replicated\nsetting.N = 2\nsetting.M = 3\n");
  EXPECT_EQ(c.dist, MPrimeDistribution::PointMass(3, 2));
  EXPECT_EQ(c.trials, 1000u);
  EXPECT_EQ(c.field, "gf256");
}

TEST(ConfigTest, Rejections) {
  const std::string head = "setting.N = 3\nsetting.M = 2\n";
  EXPECT_THROW(ParseConfig(head + "setting.variant = mds\n"), std::invalid_argument);
  EXPECT_THROW(ParseConfig(head + "setting.variant = replicated\nsetting.K = 2\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig(head + "setting.variant = tcollusion\nsetting.K = 2\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig(head + "setting.variant = replicated\nsetting.T = 2\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig(head + "setting.variant = replicated\ncolour = red\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig(head + "setting.variant = replicated\ntrials = 0\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig(head + "setting.variant = replicated\ntrials = -4\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig(head + "setting.N = 4\nsetting.variant = replicated\n"),
               std::invalid_argument);
  try {
    ParseConfig(head + "setting.variant = replicated\nno equals sign\n");
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(ConfigTest, SeedOverrideFromEnvironment) {
  ExperimentConfig c;
  c.seed = 1;
  unsetenv("WPIR_SEED");
  EXPECT_FALSE(SeedFromEnvironment().has_value());
  ApplySeedOverride(c);
  EXPECT_EQ(c.seed, 1u);
  setenv("WPIR_SEED", "12345", 1);
  ApplySeedOverride(c);
  EXPECT_EQ(c.seed, 12345u);
  setenv("WPIR_SEED", "abc", 1);
  EXPECT_THROW(SeedFromEnvironment(), std::invalid_argument);
  unsetenv("WPIR_SEED");
}

class SocketRig {
 public:
  SocketRig(const PirSetting& s, std::uint64_t seed) : rig_(MakeRig(s, seed)) {
    for (const ServerStore& store : rig_.stores) {
      servers_.push_back(std::make_unique<SocketServer>(ServerHandler(store, Field::Default()),
                                                        Endpoint{"127.0.0.1", 0}));
      servers_.back()->Start();
      endpoints_.push_back(servers_.back()->endpoint());
    }
  }
  ~SocketRig() {
    for (auto& s : servers_) s->Stop();
  }
  const Rig& rig() const { return rig_; }
  const std::vector<Endpoint>& endpoints() const { return endpoints_; }
  SocketServer& server(int i) { return *servers_[i]; }

 private:
  Rig rig_;
  std::vector<std::unique_ptr<SocketServer>> servers_;
  std::vector<Endpoint> endpoints_;
};

TEST(SocketTest, LoopbackSessionsMatchInProcess) {
  for (const PirSetting& s : {PirSetting::Replicated(3, 2), PirSetting::Mds(3, 2, 2),
                              PirSetting::TCollusion(3, 2, 2)}) {
    SocketRig sockets(s, 21);
    SocketTransport remote(sockets.endpoints());
    InProcessTransport local(sockets.rig().stores, Field::Default());
    const auto dist = MPrimeDistribution::Parse("1/2,1/2");
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const int theta = 1 + static_cast<int>(seed % 2);
      const auto a = RunSession(s, theta, dist, seed, remote, *sockets.rig().library);
      const auto b = RunSession(s, theta, dist, seed, local, *sockets.rig().library);
      EXPECT_EQ(a.queries, b.queries);
      EXPECT_EQ(a.answers, b.answers);
      EXPECT_EQ(a.download_bits(), b.download_bits());
      EXPECT_EQ(a.framing_bytes, b.framing_bytes);
    }
  }
}

TEST(SocketTest, DownServerIsNamed) {
  std::uint16_t port = 0;
  {
    const Rig rig = MakeRig(PirSetting::Replicated(2, 2), 1);
    SocketServer dead(ServerHandler(rig.stores[0], Field::Default()), Endpoint{"127.0.0.1", 0});
    port = dead.port();
  }
  SocketTransport t({Endpoint{"127.0.0.1", port}});
  const Bytes frame = Frame(EncodeQuery(QueryToken::Null(), *Field::Default()));
  try {
    t.Exchange(0, frame);
    FAIL() << "expected a transport error";
  } catch (const TransportError& e) {
    EXPECT_NE(std::string(e.what()).find("127.0.0.1:" + std::to_string(port)),
              std::string::npos)
        << e.what();
  }
}

// Raw client: send bytes, read until the server closes.
Bytes RawExchange(std::uint16_t port, const Bytes& request) {
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  EXPECT_EQ(connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
  EXPECT_EQ(write(fd, request.data(), request.size()), static_cast<ssize_t>(request.size()));
  Bytes reply;
  std::uint8_t buf[4096];
  for (ssize_t got; (got = read(fd, buf, sizeof(buf))) > 0;) reply.insert(reply.end(), buf, buf + got);
  close(fd);
  return reply;
}

TEST(SocketTest, NullQueryGetsEmptyAnswerThenClose) {
  SocketRig sockets(PirSetting::Replicated(2, 2), 2);
  const Bytes reply = RawExchange(sockets.endpoints()[0].port,
                                  Frame(EncodeQuery(QueryToken::Null(), *Field::Default())));
  EXPECT_EQ(reply, (Bytes{0, 0, 0, 4, 0, 0, 0, 0}));
}

TEST(SocketTest, GarbageIsDroppedWithoutReply) {
  SocketRig sockets(PirSetting::Replicated(2, 2), 2);
  EXPECT_TRUE(RawExchange(sockets.endpoints()[1].port, Bytes{0, 0, 0, 2, 0x09, 0x00}).empty());
  EXPECT_TRUE(RawExchange(sockets.endpoints()[1].port, Bytes{0, 0, 0, 2, 0x01, 0x05}).empty());
  // Still serving afterwards.
  const Bytes reply = RawExchange(sockets.endpoints()[1].port,
                                  Frame(EncodeQuery(QueryToken::Clean(1), *Field::Default())));
  EXPECT_EQ(reply.size(), 4u + 4 + 4);
  EXPECT_GE(sockets.server(1).rejected(), 2u);
}

TEST(EndpointTest, Parse) {
  EXPECT_EQ(Endpoint::Parse(":9000").ToString(), "127.0.0.1:9000");
  EXPECT_EQ(Endpoint::Parse("10.0.0.2:80").host, "10.0.0.2");
  EXPECT_THROW(Endpoint::Parse("nohost"), std::invalid_argument);
  EXPECT_THROW(Endpoint::Parse("h:99999"), std::invalid_argument);
}

}  // namespace
}  // namespace wpir
