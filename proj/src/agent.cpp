#include "demoguide/agent.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace demoguide {

namespace {

using nlohmann::json;

json spec_to_json(const MlpSpec& spec) {
  return json{{"input_dim", spec.input_dim},
              {"hidden", spec.hidden},
              {"output_dim", spec.output_dim},
              {"activation", "tanh"}};
}

MlpSpec spec_from_json(const json& j) {
  MlpSpec spec;
  spec.input_dim = j.at("input_dim").get<int>();
  spec.hidden = j.at("hidden").get<std::vector<int>>();
  spec.output_dim = j.at("output_dim").get<int>();
  if (j.at("activation").get<std::string>() != "tanh") {
    throw std::invalid_argument("checkpoint: unsupported activation");
  }
  spec.check();
  return spec;
}

json net_to_json(const MlpSpec& spec, const Vec& values) {
  return json{{"spec", spec_to_json(spec)}, {"values", values}};
}

}  // namespace

Policy Policy::init(int obs_dim, int act_dim, Rng& rng, std::vector<int> hidden) {
  Policy p;
  p.spec = MlpSpec{obs_dim, std::move(hidden), act_dim};
  p.params = init_policy_params(p.spec, rng);
  return p;
}

Critic Critic::init(int obs_dim, Rng& rng, std::vector<int> hidden) {
  Critic c;
  c.spec = MlpSpec{obs_dim, std::move(hidden), 1};
  c.params = init_mlp_params(c.spec, rng);
  return c;
}

Vec Critic::value_batch(const Mat& obs) const {
  const Mat out = forward_batch(params, spec, obs);
  Vec v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i][0];
  return v;
}

std::string to_checkpoint_json(const std::string& env_name, const Policy& policy,
                               const Critic& critic) {
  json j{{"format", "demoguide-checkpoint-v1"},
         {"env", env_name},
         {"policy", net_to_json(policy.spec, policy.params)},
         {"critic", net_to_json(critic.spec, critic.params)}};
  return j.dump();
}

void from_checkpoint_json(const std::string& text, std::string& env_name,
                          Policy& policy, Critic& critic) {
  json j = json::parse(text);
  if (j.value("format", "") != "demoguide-checkpoint-v1") {
    throw std::invalid_argument("checkpoint: unknown format");
  }
  env_name = j.at("env").get<std::string>();
  policy.spec = spec_from_json(j.at("policy").at("spec"));
  policy.params = j.at("policy").at("values").get<Vec>();
  if (static_cast<int>(policy.params.size()) != policy_param_count(policy.spec)) {
    throw std::invalid_argument("checkpoint: policy value count mismatch");
  }
  critic.spec = spec_from_json(j.at("critic").at("spec"));
  critic.params = j.at("critic").at("values").get<Vec>();
  if (static_cast<int>(critic.params.size()) != critic.spec.param_count()) {
    throw std::invalid_argument("checkpoint: critic value count mismatch");
  }
}

void save_checkpoint(const std::string& path, const std::string& env_name,
                     const Policy& policy, const Critic& critic) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open checkpoint file for write: " + path);
  out << to_checkpoint_json(env_name, policy, critic) << '\n';
}

void load_checkpoint(const std::string& path, std::string& env_name,
                     Policy& policy, Critic& critic) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  from_checkpoint_json(text, env_name, policy, critic);
}

}  // namespace demoguide
