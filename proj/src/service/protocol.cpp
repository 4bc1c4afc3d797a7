#include "guardrails/service/protocol.hpp"

#include <json.hpp>

#include "guardrails/sim/builtin.hpp"

namespace guardrails::service {

using nlohmann::json;

namespace {

// Non-finite numbers become null (JSON has no infinities).
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool finite_number(const json& j, const char* key) {
  return j.contains(key) && j[key].is_number() && std::isfinite(j[key].get<double>());
}

}  // namespace

std::string error_frame(const std::string& code, const std::string& detail) {
  return json{{"type", "error"}, {"code", code}, {"detail", detail}}.dump();
}

std::string scenario_list_frame(const std::string& default_scenario) {
  json list = json::array();
  for (const auto& c : sim::builtin_scenarios())
    list.push_back({{"name", c.name},
                    {"model", sim::to_string(c.model)},
                    {"description", c.description},
                    {"live", c.model != sim::ModelKind::quadrotor}});
  return json{{"type", "scenario_list"}, {"default", default_scenario}, {"scenarios", list}}.dump();
}

std::string telemetry_frame(sim::ModelKind model, const std::vector<std::string>& constraint_names,
                            const sim::TraceRecord& rec, std::uint64_t dropped) {
  json j;
  j["type"] = "telemetry";
  j["t"] = rec.t;
  json state = json::object();
  const auto cols = sim::state_columns(model);
  for (std::size_t i = 0; i < cols.size() && i < rec.state.size(); ++i) state[cols[i]] = num(rec.state[i]);
  j["state"] = state;
  if (model == sim::ModelKind::quadrotor) {
    const auto in = sim::input_columns(model);
    json d = json::object(), o = json::object();
    for (std::size_t i = 0; i < in.size(); ++i) {
      d[in[i]] = num(rec.u_d[i]);
      o[in[i]] = num(rec.u_out[i]);
    }
    j["u_d"] = d;
    j["u_out"] = o;
  } else {
    const bool fw = model == sim::ModelKind::fixed_wing;
    j["uP_d"] = fw ? num(rec.u_d[0]) : json(0.0);
    j["uz_d"] = num(rec.u_d.back());
    j["uP_out"] = fw ? num(rec.u_out[0]) : json(0.0);
    j["uz_out"] = num(rec.u_out.back());
  }
  j["lambda"] = num(rec.lambda);
  j["h_I"] = num(rec.h_I);
  j["h_min"] = num(rec.h_min);
  json h = json::object();
  for (std::size_t i = 0; i < constraint_names.size() && i < rec.h_values.size(); ++i)
    h[constraint_names[i]] = num(rec.h_values[i]);
  j["h"] = h;
  j["active_constraint"] = rec.active_constraint;
  j["dropped"] = dropped;
  return j.dump();
}

std::string telemetry_frame(const Session& session, const sim::TraceRecord& rec, std::uint64_t dropped) {
  return telemetry_frame(session.trace().model, session.trace().constraint_names, rec, dropped);
}

Reply handle_message(Session& session, const std::string& text, int& telemetry_every) {
  Reply r;
  auto fail = [&](const std::string& code, const std::string& detail, bool close) {
    r.frames.push_back(error_frame(code, detail));
    r.close = close;
    return r;
  };

  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::exception& e) {
    return fail("bad_json", e.what(), true);
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
    return fail("bad_message", "frame must be a JSON object with a string 'type'", true);
  const std::string type = msg["type"];

  if (type == "start") {
    std::string name = session.options().default_scenario;
    if (msg.contains("scenario")) {
      if (!msg["scenario"].is_string()) return fail("bad_message", "'scenario' must be a string", true);
      name = msg["scenario"];
    }
    if (msg.contains("every")) {
      if (!msg["every"].is_number_integer() || msg["every"].get<long long>() < 1)
        return fail("bad_message", "'every' must be a positive integer", true);
      telemetry_every = static_cast<int>(msg["every"].get<long long>());
    }
    try {
      session.start(name);
    } catch (const std::exception& e) {
      return fail("unknown_scenario", e.what(), false);
    }
    return r;
  }
  if (type == "input") {
    if (!finite_number(msg, "uP_d") || !finite_number(msg, "uz_d"))
      return fail("bad_message", "input needs finite numbers uP_d (rad/s) and uz_d (g)", true);
    if (!session.started()) return fail("not_started", "send start first", false);
    session.set_input(msg["uP_d"].get<double>(), msg["uz_d"].get<double>());
    return r;
  }
  if (type == "pause" || type == "resume" || type == "reset") {
    if (!session.started()) return fail("not_started", "send start first", false);
    if (type == "pause") session.pause();
    else if (type == "resume") session.resume();
    else session.reset();
    return r;
  }
  if (type == "list") {
    r.frames.push_back(scenario_list_frame(session.options().default_scenario));
    return r;
  }
  return fail("unknown_type", "unknown message type '" + type + "'", true);
}

}  // namespace guardrails::service
