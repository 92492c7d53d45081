// SPDX-License-Identifier: Apache-2.0
#include "robotid/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "robotid/core/angles.hpp"

namespace robotid::sim {

namespace {

double standard_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

double beta(Rng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  double v = x / (x + y);
  // Keep away from the empty-slot marker.
  return std::clamp(v, 1e-6, 1.0);
}

// Reflects a coordinate off [0, limit], flipping the associated rates.
void reflect(double& pos, double& vel, double& acc, double limit) {
  if (pos < 0.0) {
    pos = -pos;
    vel = -vel;
    acc = -acc;
  } else if (pos > limit) {
    pos = 2.0 * limit - pos;
    vel = -vel;
    acc = -acc;
  }
  pos = std::clamp(pos, 0.0, limit);
}

}  // namespace

void SimConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("SimConfig: ") + what);
  };
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  require(n_robots >= 1, "n_robots must be >= 1");
  require(n_slots >= n_robots, "n_slots must be >= n_robots");
  require(field_width > 0.0 && field_height > 0.0, "field size must be positive");
  require(frame_rate > 0.0, "frame_rate must be positive");
  require(sigma_y >= 0.0 && sigma_x >= sigma_y, "noise must satisfy sigma_x >= sigma_y >= 0");
  require(sigma_phi >= 0.0, "sigma_phi must be >= 0");
  require(position_noise_correlation >= 0.0 && position_noise_correlation < 1.0,
          "position_noise_correlation must be in [0, 1)");
  require(prob(p_fn), "p_fn must be a probability");
  require(p_fp >= 0.0, "p_fp must be >= 0");
  require(occlusion_rate >= 0.0 && occlusion_rate <= 1.0, "occlusion_rate must be in [0, 1]");
  require(occlusion_min >= 0 && occlusion_max >= occlusion_min, "bad occlusion duration range");
  require(prob(broadcast_dropout), "broadcast_dropout must be a probability");
  require(v_max >= 0.0 && omega_max >= 0.0, "speed limits must be >= 0");
  require(accel_sigma >= 0.0 && angular_accel_sigma >= 0.0, "motion noise must be >= 0");
  require(accel_tau > 0.0 && angular_tau > 0.0, "time constants must be positive");
  require(gamma_true_a > 0.0 && gamma_true_b > 0.0 && gamma_clutter_a > 0.0 &&
              gamma_clutter_b > 0.0,
          "confidence Beta parameters must be positive");
}

core::SequenceMeta SimConfig::meta() const {
  core::SequenceMeta m;
  m.n_robots = n_robots;
  m.n_slots = n_slots;
  m.field_width = field_width;
  m.field_height = field_height;
  m.frame_rate = frame_rate;
  m.sigma_x = sigma_x;
  m.sigma_y = sigma_y;
  m.sigma_phi = sigma_phi;
  m.p_fn = p_fn;
  m.p_fp = p_fp;
  m.seed = seed;
  return m;
}

WorldState initial_world(const SimConfig& config, Rng& rng) {
  WorldState w;
  w.robots.resize(static_cast<std::size_t>(config.n_robots));
  for (RobotState& r : w.robots) {
    r.x = uniform(rng, 0.0, config.field_width);
    r.y = uniform(rng, 0.0, config.field_height);
    const double dir = uniform(rng, -core::kPi, core::kPi);
    const double speed = uniform(rng, 0.0, 0.5 * config.v_max);
    r.vx = speed * std::cos(dir);
    r.vy = speed * std::sin(dir);
    r.phi = uniform(rng, -core::kPi, core::kPi);
    r.broadcast = r.phi;
    r.noise_x = standard_normal(rng);
    r.noise_y = standard_normal(rng);
  }
  return w;
}

WorldState step_world(const WorldState& state, const SimConfig& config, Rng& rng) {
  WorldState next = state;
  next.t = state.t + 1;
  const double dt = 1.0 / config.frame_rate;
  const double decay = std::exp(-dt / config.accel_tau);
  const double kick = config.accel_sigma * std::sqrt(1.0 - decay * decay);
  const double wdecay = std::exp(-dt / config.angular_tau);
  const double wkick = config.angular_accel_sigma * std::sqrt(1.0 - wdecay * wdecay);
  std::uniform_int_distribution<int> duration(config.occlusion_min, config.occlusion_max);
  const double rho = config.position_noise_correlation;
  const double innovation = std::sqrt(1.0 - rho * rho);

  for (RobotState& r : next.robots) {
    r.ax = decay * r.ax + kick * standard_normal(rng);
    r.ay = decay * r.ay + kick * standard_normal(rng);
    r.vx += r.ax * dt;
    r.vy += r.ay * dt;
    const double speed = std::hypot(r.vx, r.vy);
    if (speed > config.v_max) {
      const double s = config.v_max / speed;
      r.vx *= s;
      r.vy *= s;
    }
    r.x += r.vx * dt;
    r.y += r.vy * dt;
    reflect(r.x, r.vx, r.ax, config.field_width);
    reflect(r.y, r.vy, r.ay, config.field_height);

    r.alpha = wdecay * r.alpha + wkick * standard_normal(rng);
    r.omega = std::clamp(r.omega + r.alpha * dt, -config.omega_max, config.omega_max);
    r.phi = core::wrap_angle(r.phi + r.omega * dt);

    if (r.visible && uniform(rng, 0.0, 1.0) < config.occlusion_rate) {
      r.occluded_until = next.t + duration(rng);
    }
    r.visible = next.t >= r.occluded_until;

    if (uniform(rng, 0.0, 1.0) >= config.broadcast_dropout) r.broadcast = r.phi;

    r.noise_x = rho * r.noise_x + innovation * standard_normal(rng);
    r.noise_y = rho * r.noise_y + innovation * standard_normal(rng);
  }
  return next;
}

std::pair<core::FrameInput, core::AssignmentLabel> observe(const WorldState& state,
                                                           const SimConfig& config, Rng& rng) {
  struct Candidate {
    core::Detection det;
    int cls;
  };
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(config.n_slots) + 4);

  for (std::size_t i = 0; i < state.robots.size(); ++i) {
    const RobotState& r = state.robots[i];
    if (!r.visible) continue;
    if (uniform(rng, 0.0, 1.0) < config.p_fn) continue;
    core::Detection d;
    d.x = std::clamp((r.x + config.sigma_x * r.noise_x) / config.field_width, 0.0, 1.0);
    d.y = std::clamp((r.y + config.sigma_y * r.noise_y) / config.field_height, 0.0, 1.0);
    d.phi = core::wrap_angle(r.phi + config.sigma_phi * standard_normal(rng));
    d.gamma = beta(rng, config.gamma_true_a, config.gamma_true_b);
    cands.push_back({d, static_cast<int>(i) + 1});
  }

  int n_clutter = 0;
  if (config.p_fp > 0.0) {
    std::poisson_distribution<int> poisson(config.p_fp);
    n_clutter = poisson(rng);
  }
  for (int k = 0; k < n_clutter; ++k) {
    core::Detection d;
    d.x = uniform(rng, 0.0, 1.0);
    d.y = uniform(rng, 0.0, 1.0);
    d.phi = uniform(rng, -core::kPi, core::kPi);
    d.gamma = beta(rng, config.gamma_clutter_a, config.gamma_clutter_b);
    cands.push_back({d, 0});
  }

  const auto m = static_cast<std::size_t>(config.n_slots);
  if (cands.size() > m) {
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.det.gamma > b.det.gamma;
    });
    cands.resize(m);
  }

  std::vector<std::size_t> slot_of(m);
  std::iota(slot_of.begin(), slot_of.end(), std::size_t{0});
  std::shuffle(slot_of.begin(), slot_of.end(), rng);

  core::FrameInput frame;
  frame.t = state.t;
  frame.slots.assign(m, core::Detection{});
  core::AssignmentLabel label;
  label.classes.assign(m, 0);
  for (std::size_t k = 0; k < cands.size(); ++k) {
    frame.slots[slot_of[k]] = cands[k].det;
    label.classes[slot_of[k]] = cands[k].cls;
  }
  frame.broadcasts.reserve(state.robots.size());
  for (const RobotState& r : state.robots) frame.broadcasts.push_back(r.broadcast);
  return {std::move(frame), std::move(label)};
}

std::vector<core::RobotPose> truth_poses(const WorldState& state, const SimConfig& config) {
  std::vector<core::RobotPose> out;
  out.reserve(state.robots.size());
  for (const RobotState& r : state.robots) {
    out.push_back({r.x / config.field_width, r.y / config.field_height, r.phi, r.visible});
  }
  return out;
}

core::SequenceRecord generate_sequence(const SimConfig& config, std::int64_t length, Rng& rng) {
  config.validate();
  if (length < 1) throw std::invalid_argument("generate_sequence: length must be >= 1");
  core::SequenceRecord rec;
  rec.meta = config.meta();
  rec.frames.reserve(static_cast<std::size_t>(length));
  WorldState world = initial_world(config, rng);
  for (std::int64_t t = 0; t < length; ++t) {
    if (t > 0) world = step_world(world, config, rng);
    auto [input, label] = observe(world, config, rng);
    rec.frames.push_back({std::move(input), std::move(label), truth_poses(world, config)});
  }
  return rec;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 over (master, index)
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace robotid::sim
