#include "kva/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "kva/error.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "io";
using nlohmann::json;

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(kModule, source + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& source) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(kModule, source + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T require(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key)) throw InputError(kModule, source + ": missing field '" + key + "'");
  return get_or<T>(j, key, T{}, source);
}

SwapDirection parse_direction(const std::string& s, const std::string& source) {
  if (s == "payer" || s == "pay" || s == "payer-fixed") return SwapDirection::PayerFixed;
  if (s == "receiver" || s == "rec" || s == "receiver-fixed") return SwapDirection::ReceiverFixed;
  throw InputError(kModule, source + ": unknown direction '" + s + "'");
}

SwapSpec parse_trade(const json& j, const std::string& source) {
  if (!j.is_object()) throw InputError(kModule, source + ": trade must be an object");
  SwapSpec s;
  s.id = require<std::string>(j, "id", source);
  const std::string where = source + " trade '" + s.id + "'";
  s.counterparty_id = require<std::string>(j, "counterpartyId", where);
  s.notional = require<double>(j, "notional", where);
  s.fixed_rate = require<double>(j, "fixedRate", where);
  s.maturity = require<double>(j, "maturityYears", where);
  s.fixed_frequency = get_or<int>(j, "freq", 2, where);
  s.float_frequency = get_or<int>(j, "floatFreq", s.fixed_frequency, where);
  s.direction = parse_direction(require<std::string>(j, "direction", where), where);
  s.collateralized = get_or<bool>(j, "collateralized", false, where);
  try {
    validate(s);
  } catch (const Error& e) {
    throw InputError(kModule, where + ": " + e.what());
  }
  return s;
}
}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(kModule, "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MarketEnvironment parse_market(const std::string& text, const std::string& source) {
  const json j = parse_json(text, source);
  if (!j.is_object()) throw InputError(kModule, source + ": market must be an object");
  MarketEnvironment env;
  if (j.contains("curve")) {
    std::vector<CurvePillar> pillars;
    for (const auto& p : j.at("curve")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw InputError(kModule, source + ": curve entries must be [t, zeroRate]");
      pillars.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    try {
      env.curve = DiscountCurve(pillars);
    } catch (const Error& e) {
      throw InputError(kModule, source + ": " + e.what());
    }
  }
  if (j.contains("hw")) {
    const auto& hw = j.at("hw");
    env.mean_reversion = get_or<double>(hw, "a", env.mean_reversion, source);
    env.volatility = get_or<double>(hw, "sigma", env.volatility, source);
  }
  if (!(env.mean_reversion > 0.0) || !(env.volatility >= 0.0))
    throw InputError(kModule, source + ": hw.a must be > 0 and hw.sigma >= 0");
  env.seed = get_or<std::uint64_t>(j, "seed", env.seed, source);
  if (j.contains("issuer")) {
    const auto& is = j.at("issuer");
    env.issuer.funding_spread = get_or<double>(is, "fundingSpread", env.issuer.funding_spread, source);
    env.issuer.recovery = get_or<double>(is, "recovery", env.issuer.recovery, source);
    env.issuer.collateral_spread = get_or<double>(is, "collateralSpread", env.issuer.collateral_spread, source);
    env.issuer.spread_is_lambda = get_or<bool>(is, "spreadIsLambda", env.issuer.spread_is_lambda, source);
  }
  try {
    validate(env.issuer);
  } catch (const Error& e) {
    throw InputError(kModule, source + ": " + e.what());
  }
  return env;
}

MarketEnvironment load_market(const std::string& path) { return parse_market(read_file(path), path); }

Portfolio parse_portfolio(const std::string& text, const std::vector<CounterpartyProfile>& ratings,
                          const std::string& source) {
  const json j = parse_json(text, source);
  Portfolio pf;
  const json* trades = &j;
  if (j.is_object()) {
    if (!j.contains("trades")) throw InputError(kModule, source + ": missing field 'trades'");
    trades = &j.at("trades");
    if (j.contains("counterparties")) {
      for (const auto& c : j.at("counterparties")) {
        const std::string id = require<std::string>(c, "id", source);
        const std::string where = source + " counterparty '" + id + "'";
        CounterpartyProfile cp = find_rating(ratings, require<std::string>(c, "rating", where));
        cp.id = id;
        cp.cds_spread = get_or<double>(c, "cdsSpread", cp.cds_spread, where);
        cp.recovery = get_or<double>(c, "recovery", cp.recovery, where);
        cp.ccr_weight = get_or<double>(c, "ccrWeight", cp.ccr_weight, where);
        cp.cva_weight = get_or<double>(c, "cvaWeight", cp.cva_weight, where);
        cp.domicile_exempt_cva = get_or<bool>(c, "domicileExempt", false, where);
        validate(cp);
        pf.counterparties[id] = cp;
      }
    }
  }
  if (!trades->is_array()) throw InputError(kModule, source + ": trades must be a list");
  for (const auto& t : *trades) pf.trades.push_back(parse_trade(t, source));
  if (pf.trades.empty()) throw InputError(kModule, source + ": portfolio has no trades");
  return pf;
}

Portfolio load_portfolio(const std::string& path, const std::vector<CounterpartyProfile>& ratings) {
  return parse_portfolio(read_file(path), ratings, path);
}

std::vector<CounterpartyProfile> parse_ratings(const std::string& text, const std::string& source) {
  const json j = parse_json(text, source);
  if (!j.is_object() || !j.contains("ratings")) throw InputError(kModule, source + ": missing field 'ratings'");
  const int version = get_or<int>(j, "version", 1, source);
  if (version != 1) throw InputError(kModule, source + ": unsupported rating table version " + std::to_string(version));
  const double recovery = get_or<double>(j, "recovery", 0.4, source);
  std::vector<CounterpartyProfile> out;
  for (const auto& r : j.at("ratings")) {
    CounterpartyProfile cp;
    cp.rating = require<std::string>(r, "rating", source);
    cp.id = cp.rating;
    cp.cds_spread = require<double>(r, "spreadBp", source) * 1e-4;
    cp.recovery = get_or<double>(r, "recovery", recovery, source);
    cp.ccr_weight = require<double>(r, "ccrWeight", source);
    cp.cva_weight = require<double>(r, "cvaWeight", source);
    validate(cp);
    out.push_back(cp);
  }
  if (out.empty()) throw InputError(kModule, source + ": empty rating table");
  return out;
}

std::vector<CounterpartyProfile> load_ratings(const std::string& path) {
  return parse_ratings(read_file(path), path);
}

std::vector<CounterpartyProfile> default_ratings() {
  auto make = [](const char* r, double spread_bp, double ccr, double cva) {
    CounterpartyProfile cp;
    cp.id = cp.rating = r;
    cp.cds_spread = spread_bp * 1e-4;
    cp.recovery = 0.4;
    cp.ccr_weight = ccr;
    cp.cva_weight = cva;
    return cp;
  };
  return {make("AAA", 30, 0.20, 0.007), make("A", 75, 0.50, 0.008), make("BB", 250, 1.00, 0.02),
          make("CCC", 750, 1.50, 0.10)};
}

const CounterpartyProfile& find_rating(const std::vector<CounterpartyProfile>& ratings, const std::string& rating) {
  for (const auto& r : ratings)
    if (r.rating == rating) return r;
  throw InputError(kModule, "unknown rating '" + rating + "'");
}

}  // namespace kva
