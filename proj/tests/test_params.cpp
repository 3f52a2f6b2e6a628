#include <doctest.h>

#include <string>

#include "ccrelay/errors.hpp"
#include "ccrelay/params.hpp"

using namespace ccrelay;

namespace {

std::string error_of(const SystemParams& p) {
  try {
    p.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults are the five-user configuration") {
  SystemParams p;
  CHECK(p.K == 5);
  CHECK(p.L == 3);
  CHECK(p.t == 2);
  CHECK(p.f == 8);
  CHECK(p.bits_per_symbol == 2);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("derived quantities") {
  SystemParams p;
  CHECK(p.gamma() == Rational(2, 5));
  CHECK(p.packets_per_file() == 10);
  CHECK(p.subpackets_per_packet() == 1);
  CHECK(p.file_bits() == 80);
  CHECK(p.num_stages() == 1);
  CHECK(p.transmissions_per_stage() == 6);
  CHECK(p.symbols_per_subpacket() == 4);

  SystemParams q;
  q.K = 6;
  q.t = 2;
  q.L = 3;
  q.f = 12;
  q.bits_per_symbol = 4;
  CHECK(q.subpackets_per_packet() == 3);
  CHECK(q.file_bits() == 12u * 15u * 3u);
  CHECK(q.symbols_per_subpacket() == 3);
}

TEST_CASE("invariant violations are named") {
  SystemParams p;
  p.K = 3;
  p.L = 3;
  p.t = 1;
  CHECK(error_of(p) == "K ≥ t+L violated");

  p = {};
  p.t = 0;
  CHECK(error_of(p).find("t >= 1 violated") != std::string::npos);

  p = {};
  p.f = 7;
  CHECK(error_of(p) == "f divisible by bits per symbol violated");

  p = {};
  p.bits_per_symbol = 3;
  CHECK(error_of(p).find("bits_per_symbol must be 2, 4 or 6") != std::string::npos);

  p = {};
  p.L = 0;
  p.K = 1;
  const auto msg = error_of(p);
  CHECK(msg.find("L >= 1 violated") != std::string::npos);

  p = {};
  p.P_bs = 0.0;
  CHECK(error_of(p) == "P_bs > 0 violated");
}
