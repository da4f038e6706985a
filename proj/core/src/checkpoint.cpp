#include "hemoflow/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace hemoflow {

namespace {
constexpr int kCheckpointVersion = 1;
}

void save_checkpoint(const TrainResult &state,
                     const std::filesystem::path &path) {
  nlohmann::json j;
  j["version"] = kCheckpointVersion;
  j["sizes"] = state.net.sizes;
  j["softplus_area_head"] = state.net.softplus_area_head;
  j["params"] = state.net.params;
  j["log_tau_r"] = state.xi.log_tau_r;
  j["log_E0"] = state.xi.log_E0;
  j["adam"] = {{"m", state.adam.m},
               {"v", state.adam.v},
               {"k", state.adam.k},
               {"beta1", state.adam.beta1},
               {"beta2", state.adam.beta2},
               {"eps", state.adam.eps}};
  j["epoch"] = state.history.empty() ? 0 : state.history.back().epoch;
  j["T_cycle"] = state.T_cycle;
  j["scales"] = {{"L_c", state.scales.L_c},
                 {"A_c", state.scales.A_c},
                 {"U_c", state.scales.U_c},
                 {"T_c", state.scales.T_c},
                 {"P_c", state.scales.P_c}};
  nlohmann::json hist = nlohmann::json::array();
  for (const auto &r : state.history)
    hist.push_back({r.epoch, r.Ld, r.Lr, r.Lb, r.L, r.tau_r, r.E0});
  j["history"] = hist;

  std::ofstream out(path);
  if (!out)
    throw SchemaError("save_checkpoint: cannot write " + path.string());
  out << j.dump(1);
}

TrainResult load_checkpoint(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw SchemaError("load_checkpoint: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw SchemaError("load_checkpoint: bad JSON: " + std::string(e.what()));
  }
  if (j.value("version", 0) != kCheckpointVersion)
    throw SchemaError("load_checkpoint: unsupported checkpoint version");

  TrainResult st;
  st.net.sizes = j.at("sizes").get<std::vector<int>>();
  st.net.softplus_area_head = j.at("softplus_area_head").get<bool>();
  st.net.compute_offsets();
  st.net.params = j.at("params").get<std::vector<double>>();
  st.net.validate();
  st.xi.log_tau_r = j.at("log_tau_r").get<double>();
  st.xi.log_E0 = j.at("log_E0").get<double>();
  const auto &a = j.at("adam");
  st.adam.m = a.at("m").get<std::vector<double>>();
  st.adam.v = a.at("v").get<std::vector<double>>();
  st.adam.k = a.at("k").get<long>();
  st.adam.beta1 = a.at("beta1").get<double>();
  st.adam.beta2 = a.at("beta2").get<double>();
  st.adam.eps = a.at("eps").get<double>();
  st.T_cycle = j.at("T_cycle").get<double>();
  const auto &s = j.at("scales");
  st.scales.L_c = s.at("L_c").get<double>();
  st.scales.A_c = s.at("A_c").get<double>();
  st.scales.U_c = s.at("U_c").get<double>();
  st.scales.T_c = s.at("T_c").get<double>();
  st.scales.P_c = s.at("P_c").get<double>();
  for (const auto &r : j.at("history")) {
    TrainRecord t;
    t.epoch = r.at(0).get<long>();
    t.Ld = r.at(1).get<double>();
    t.Lr = r.at(2).get<double>();
    t.Lb = r.at(3).get<double>();
    t.L = r.at(4).get<double>();
    t.tau_r = r.at(5).get<double>();
    t.E0 = r.at(6).get<double>();
    st.history.push_back(t);
  }
  return st;
}

} // namespace hemoflow
