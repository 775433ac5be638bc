//! \file test_capi.cpp
//! \brief The shared-library C API: decks, runs, sweeps, memory model, errors.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "amrbench.h"

namespace {

const char *kDeck = R"(
[mesh]
dim = 2
nx = 32
[block]
nx1 = 16
[amr]
max_levels = 2
refine_tol = 0.03
derefine_tol = 0.003
[burgers]
num_scalar = 2
width = 0.1
[run]
nlim = 3
)";

} // namespace

TEST_CASE("deck parse, get, set, render through the C API") {
  amrb_deck *deck = nullptr;
  REQUIRE(amrb_deck_parse_text(kDeck, &deck) == AMRB_OK);

  char buf[128];
  REQUIRE(amrb_deck_get(deck, "block", "nx1", buf, sizeof(buf)) == AMRB_OK);
  CHECK(std::string(buf) == "16");
  REQUIRE(amrb_deck_get(deck, "burgers", "cfl", buf, sizeof(buf)) == AMRB_OK);
  CHECK(std::string(buf).substr(0, 3) == "0.4");

  CHECK(amrb_deck_set(deck, "run", "workers", "2") == AMRB_OK);
  REQUIRE(amrb_deck_get(deck, "run", "workers", buf, sizeof(buf)) == AMRB_OK);
  CHECK(std::string(buf) == "2");

  CHECK(amrb_deck_set(deck, "block", "nx1", "10") == AMRB_ERR_VALIDATION);
  CHECK(std::strlen(amrb_last_error()) > 0);

  size_t len = 0;
  REQUIRE(amrb_deck_render(deck, nullptr, 0, &len) == AMRB_OK);
  REQUIRE(len > 0);
  std::string text(len + 1, '\0');
  REQUIRE(amrb_deck_render(deck, text.data(), text.size(), &len) == AMRB_OK);
  amrb_deck *again = nullptr;
  REQUIRE(amrb_deck_parse_text(text.c_str(), &again) == AMRB_OK);
  amrb_deck_free(again);
  amrb_deck_free(deck);
}

TEST_CASE("run execution and reproducible metrics") {
  amrb_deck *deck = nullptr;
  REQUIRE(amrb_deck_parse_text(kDeck, &deck) == AMRB_OK);

  amrb_run *run1 = nullptr, *run2 = nullptr;
  REQUIRE(amrb_run_execute(deck, &run1) == AMRB_OK);
  REQUIRE(amrb_run_execute(deck, &run2) == AMRB_OK);

  CHECK(amrb_run_cycles(run1) == 3);
  CHECK(amrb_run_zone_cycles(run1) > 0);
  CHECK(amrb_run_fom(run1) > 0.0);
  CHECK(amrb_run_cell_updates(run1) > 0);
  CHECK(amrb_run_state_checksum(run1) == amrb_run_state_checksum(run2));
  CHECK(amrb_run_zone_cycles(run1) == amrb_run_zone_cycles(run2));
  CHECK(amrb_run_cells_sent_local(run1) == amrb_run_cells_sent_local(run2));

  REQUIRE(amrb_run_phase_count(run1) == 13);
  CHECK(std::string(amrb_run_phase_name(run1, 0)) == "CalculateFluxes");
  double total = 0.0;
  for (size_t p = 0; p < 13; ++p) total += amrb_run_phase_seconds(run1, p);
  CHECK(total > 0.0);
  CHECK(amrb_run_wall_seconds(run1) >= amrb_run_parallel_seconds(run1));

  CHECK(amrb_run_write_csv(run1, "/tmp/amrbench_capi_csv") == AMRB_OK);

  amrb_run_free(run1);
  amrb_run_free(run2);
  amrb_deck_free(deck);
}

TEST_CASE("sweep through the C API") {
  amrb_deck *deck = nullptr;
  REQUIRE(amrb_deck_parse_text(kDeck, &deck) == AMRB_OK);

  const int64_t values[2] = {16, 8};
  amrb_sweep *sweep = nullptr;
  REQUIRE(amrb_sweep_execute(deck, "block_size", values, 2, nullptr, &sweep) == AMRB_OK);
  REQUIRE(amrb_sweep_row_count(sweep) == 2);
  CHECK(amrb_sweep_all_ok(sweep) == 1);
  CHECK(amrb_sweep_row_value(sweep, 1) == 8);
  CHECK(amrb_sweep_row_ratio(sweep, 1) > amrb_sweep_row_ratio(sweep, 0));
  CHECK(amrb_sweep_row_cell_updates(sweep, 0) > 0);

  size_t len = 0;
  REQUIRE(amrb_sweep_summary(sweep, nullptr, 0, &len) == AMRB_OK);
  CHECK(len > 0);
  amrb_sweep_free(sweep);

  CHECK(amrb_sweep_execute(deck, "bogus_axis", values, 2, nullptr, &sweep) ==
        AMRB_ERR_VALIDATION);
  amrb_deck_free(deck);
}

TEST_CASE("memory model exactness through the C API") {
  amrb_mem_params params = {};
  params.num_scalar = 8;
  params.nx1 = 8;
  params.ng = 4;
  params.bytes_per_value = 8;
  params.dimension = 3;
  params.n_meshblocks = 4096;
  params.n_threadblocks = 1024;
  params.reduced_dim = 2;

  uint64_t bytes = 0;
  REQUIRE(amrb_memory_model(&params, 0, &bytes) == AMRB_OK);
  CHECK(bytes == 8858370048ull);
  REQUIRE(amrb_memory_model(&params, 1, &bytes) == AMRB_OK);
  CHECK(bytes == 138412032ull);
}

TEST_CASE("error paths") {
  amrb_deck *deck = nullptr;
  CHECK(amrb_deck_parse_text(nullptr, &deck) == AMRB_ERR_INVALID_ARG);
  CHECK(amrb_deck_parse_text("[mesh]\nnx\n", &deck) == AMRB_ERR_PARSE);
  CHECK(std::string(amrb_last_error()).find("line 2") != std::string::npos);
  CHECK(amrb_deck_parse_file("/nonexistent/deck.ini", &deck) == AMRB_ERR_IO);
  CHECK(amrb_deck_parse_text("[mesh]\nnx = 64\n[block]\nnx1 = 28\n", &deck) ==
        AMRB_ERR_VALIDATION);
  CHECK(amrb_memory_model(nullptr, 0, nullptr) == AMRB_ERR_INVALID_ARG);
}
