#include "resmatch/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace resmatch {

using json = nlohmann::ordered_json;

std::string format_score(double score) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, score);
  return std::string(buf, end);
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw InstanceError(what); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::string text_of(const json& v, const char* what) {
  if (!v.is_string()) fail(std::string(what) + " must be a string");
  return v.get<std::string>();
}

int count_of(const json& v, const char* what) {
  if (!v.is_number_integer()) fail(std::string(what) + " must be an integer");
  return v.get<int>();
}

Category category_of(const json& v) {
  auto c = parse_category(text_of(v, "category"));
  if (!c) fail("unknown category '" + v.get<std::string>() + "'");
  return *c;
}

std::optional<Category> optional_category(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  Category c = category_of(obj.at(key));
  if (!is_reserved(c)) return std::nullopt;
  return c;
}

double score_of(const json& v) {
  if (v.is_number()) return v.get<double>();
  const std::string s = text_of(v, "score");
  double out = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || end != s.data() + s.size()) fail("bad score '" + s + "'");
  return out;
}

json contract_json(const Market& market, const Contract& c) {
  return json{{"individual", market.individuals[c.individual].id},
              {"institution", market.institutions[c.institution].id},
              {"category", std::string(to_string(c.category))}};
}

json contracts_json(const Market& market, std::span<const Contract> cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(contract_json(market, c));
  return out;
}

}  // namespace

Market parse_market(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("instance must be a JSON object");

  Market market;
  try {
    if (doc.contains("horizontal_types")) {
      for (const auto& h : doc.at("horizontal_types")) {
        HorizontalType t;
        t.id = text_of(field(h, "id"), "type id");
        t.label = h.contains("label") ? text_of(h.at("label"), "label") : t.id;
        market.horizontal_types.push_back(std::move(t));
      }
    }
    const std::size_t types = market.horizontal_types.size();

    for (const auto& s : field(doc, "institutions")) {
      Institution inst;
      inst.id = text_of(field(s, "id"), "institution id");
      inst.capacity = count_of(field(s, "capacity"), "capacity");
      if (s.contains("vertical_reservations")) {
        for (const auto& [key, value] : s.at("vertical_reservations").items()) {
          auto c = parse_category(key);
          if (!c || !is_reserved(*c)) fail("unknown reserved category '" + key + "'");
          inst.vertical_reservations[index_of(*c)] = count_of(value, "vertical reservation");
        }
      }
      for (auto& row : inst.horizontal_reservations) row.assign(types, 0);
      market.institutions.push_back(std::move(inst));
    }

    for (const auto& i : field(doc, "individuals")) {
      Individual ind;
      ind.id = text_of(field(i, "id"), "individual id");
      ind.membership = optional_category(i, "category");
      ind.declared = i.contains("declared") ? optional_category(i, "declared") : ind.membership;
      if (i.contains("horizontal_types")) {
        for (const auto& t : i.at("horizontal_types")) {
          const std::string id = text_of(t, "horizontal type");
          auto idx = market.find_type(id);
          if (!idx) fail(ind.id + ": unknown horizontal type '" + id + "'");
          ind.horizontal_types.push_back(*idx);
        }
        std::sort(ind.horizontal_types.begin(), ind.horizontal_types.end());
        ind.horizontal_types.erase(
            std::unique(ind.horizontal_types.begin(), ind.horizontal_types.end()),
            ind.horizontal_types.end());
      }
      if (i.contains("preferences")) {
        for (const auto& p : i.at("preferences")) {
          const std::string sid = text_of(field(p, "institution"), "institution");
          auto s = market.find_institution(sid);
          if (!s) fail(ind.id + ": unknown institution '" + sid + "'");
          ind.preferences.push_back({*s, category_of(field(p, "category"))});
        }
      }
      market.individuals.push_back(std::move(ind));
    }

    const std::size_t n = market.individuals.size();
    const auto& raw_institutions = doc.at("institutions");
    for (std::size_t k = 0; k < market.institutions.size(); ++k) {
      auto& inst = market.institutions[k];
      inst.scores.assign(n, std::numeric_limits<double>::quiet_NaN());
      const auto& s = raw_institutions[k];
      if (!s.contains("scores")) continue;
      for (const auto& [who, value] : s.at("scores").items()) {
        auto i = market.find_individual(who);
        if (!i) fail(inst.id + ": score for unknown individual '" + who + "'");
        inst.scores[*i] = score_of(value);
      }
    }

    if (doc.contains("reservations")) {
      for (const auto& r : doc.at("reservations")) {
        const std::string sid = text_of(field(r, "institution"), "institution");
        auto s = market.find_institution(sid);
        if (!s) fail("reservation for unknown institution '" + sid + "'");
        const std::string tid = text_of(field(r, "type"), "type");
        auto t = market.find_type(tid);
        if (!t) fail("reservation for unknown horizontal type '" + tid + "'");
        const Category c = category_of(field(r, "category"));
        market.institutions[*s].horizontal_reservations[index_of(c)][*t] =
            count_of(field(r, "count"), "reservation count");
      }
    }
  } catch (const json::exception& e) {
    fail(std::string("malformed instance: ") + e.what());
  }
  return market;
}

Market load_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_market(buf.str());
}

std::string serialize_market(const Market& market) {
  json doc;
  doc["horizontal_types"] = json::array();
  for (const auto& h : market.horizontal_types)
    doc["horizontal_types"].push_back({{"id", h.id}, {"label", h.label}});

  doc["institutions"] = json::array();
  for (const auto& inst : market.institutions) {
    json s{{"id", inst.id}, {"capacity", inst.capacity}};
    json vr = json::object();
    for (Category c : kReservedCategories)
      vr[std::string(to_string(c))] = inst.vertical_reservations[index_of(c)];
    s["vertical_reservations"] = vr;
    json scores = json::object();
    for (std::size_t i = 0; i < market.individuals.size() && i < inst.scores.size(); ++i)
      if (!std::isnan(inst.scores[i])) scores[market.individuals[i].id] = format_score(inst.scores[i]);
    s["scores"] = scores;
    doc["institutions"].push_back(s);
  }

  doc["individuals"] = json::array();
  for (const auto& ind : market.individuals) {
    json i{{"id", ind.id}};
    i["category"] = ind.membership ? json(std::string(to_string(*ind.membership))) : json(nullptr);
    i["declared"] = ind.declared ? json(std::string(to_string(*ind.declared))) : json(nullptr);
    json types = json::array();
    for (TypeIndex t : ind.horizontal_types) types.push_back(market.horizontal_types.at(t).id);
    i["horizontal_types"] = types;
    json prefs = json::array();
    for (const auto& p : ind.preferences)
      prefs.push_back({{"institution", market.institutions.at(p.institution).id},
                       {"category", std::string(to_string(p.category))}});
    i["preferences"] = prefs;
    doc["individuals"].push_back(i);
  }

  doc["reservations"] = json::array();
  for (const auto& inst : market.institutions)
    for (Category c : kAllCategories) {
      const auto& row = inst.horizontal_reservations[index_of(c)];
      for (std::size_t t = 0; t < row.size(); ++t)
        if (row[t] != 0)
          doc["reservations"].push_back({{"institution", inst.id},
                                         {"category", std::string(to_string(c))},
                                         {"type", market.horizontal_types.at(t).id},
                                         {"count", row[t]}});
    }
  return doc.dump(2) + "\n";
}

std::string serialize_matching(const Market& market, std::span<const Contract> matching) {
  std::vector<Contract> sorted(matching.begin(), matching.end());
  std::sort(sorted.begin(), sorted.end(), [&](const Contract& a, const Contract& b) {
    return market.individuals[a.individual].id < market.individuals[b.individual].id;
  });
  return json{{"matching", contracts_json(market, sorted)}}.dump(2) + "\n";
}

std::string serialize_trace(const Market& market, ChoicePolicy policy, const CopResult& result) {
  json doc;
  doc["policy"] = std::string(to_string(policy));
  doc["steps"] = json::array();
  for (const auto& step : result.trace.steps) {
    doc["steps"].push_back({{"step", step.index},
                            {"proposer", market.individuals[step.proposer].id},
                            {"proposed", contract_json(market, step.proposed)},
                            {"institution", market.institutions[step.proposed.institution].id},
                            {"available", contracts_json(market, step.available)},
                            {"held", contracts_json(market, step.held)},
                            {"rejected", contracts_json(market, step.rejected)}});
  }
  doc["matching"] = contracts_json(market, result.matching);
  return doc.dump(2) + "\n";
}

}  // namespace resmatch
