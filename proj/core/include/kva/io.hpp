#pragma once

#include <map>
#include <string>
#include <vector>

#include "kva/regcap.hpp"
#include "kva/scenarios.hpp"

namespace kva {

// Market file:
//   {"curve": [[t, zero], ...], "hw": {"a": .., "sigma": ..}, "seed": n,
//    "issuer": {"fundingSpread", "recovery", "collateralSpread", "spreadIsLambda"}}
// Every field is optional and defaults to MarketEnvironment{}.
MarketEnvironment parse_market(const std::string& text, const std::string& source = "<market>");
MarketEnvironment load_market(const std::string& path);

struct Portfolio {
  std::vector<SwapSpec> trades;
  std::map<std::string, CounterpartyProfile> counterparties;
};

// Either a list of trades or {"trades": [...], "counterparties": [...]}.
// Trade fields: id, counterpartyId, notional, fixedRate, maturityYears, freq,
// floatFreq (defaults to freq), direction ("payer" | "receiver"),
// collateralized. A counterparty names a rating from `ratings` and may
// override cdsSpread, recovery, ccrWeight, cvaWeight, domicileExempt.
Portfolio parse_portfolio(const std::string& text, const std::vector<CounterpartyProfile>& ratings,
                          const std::string& source = "<portfolio>");
Portfolio load_portfolio(const std::string& path, const std::vector<CounterpartyProfile>& ratings);

// Rating table: {"version": 1, "recovery": R, "ratings": [{"rating",
// "spreadBp", "ccrWeight", "cvaWeight"}, ...]}.
std::vector<CounterpartyProfile> parse_ratings(const std::string& text, const std::string& source = "<ratings>");
std::vector<CounterpartyProfile> load_ratings(const std::string& path);
// The table shipped as data/ratings.json.
std::vector<CounterpartyProfile> default_ratings();

const CounterpartyProfile& find_rating(const std::vector<CounterpartyProfile>& ratings, const std::string& rating);

std::string read_file(const std::string& path);

}  // namespace kva
