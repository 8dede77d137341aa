#include "phykrig/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "phykrig/ar1.hpp"
#include "phykrig/dynamics.hpp"
#include "phykrig/errors.hpp"
#include "phykrig/gp_surrogate.hpp"
#include "phykrig/rra.hpp"

namespace phykrig {
namespace io {

void write_double(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  out << buf;
}

void write_vector(std::ostream& out, const std::string& name, const Eigen::VectorXd& v) {
  out << name << ' ' << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    write_double(out, v(i));
  }
  out << '\n';
}

void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      write_double(out, m(i, j));
    }
    out << '\n';
  }
}

void write_description(std::ostream& out, const std::map<std::string, std::string>& desc) {
  out << "describe " << desc.size() << '\n';
  for (const auto& [key, value] : desc) out << key << ' ' << value << '\n';
}

std::string Reader::token() {
  std::string t;
  if (!(in_ >> t)) throw IoError("model stream: unexpected end of input");
  return t;
}

void Reader::expect(const std::string& keyword) {
  const std::string t = token();
  if (t != keyword) {
    throw IoError("model stream: expected '" + keyword + "', found '" + t + "'");
  }
}

long long Reader::integer() {
  const std::string t = token();
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (end == t.c_str() || *end != '\0') {
    throw IoError("model stream: bad integer '" + t + "'");
  }
  return v;
}

double Reader::number() {
  const std::string t = token();
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') {
    throw IoError("model stream: bad number '" + t + "'");
  }
  return v;
}

Eigen::VectorXd Reader::vector(const std::string& name) {
  expect(name);
  const long long n = integer();
  if (n < 0) throw IoError("model stream: negative vector length");
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = number();
  return v;
}

Eigen::MatrixXd Reader::matrix(const std::string& name) {
  expect(name);
  const long long rows = integer();
  const long long cols = integer();
  if (rows < 0 || cols < 0) throw IoError("model stream: negative matrix shape");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = number();
  }
  return m;
}

std::map<std::string, std::string> Reader::description() {
  expect("describe");
  const long long n = integer();
  std::map<std::string, std::string> desc;
  for (long long i = 0; i < n; ++i) {
    const std::string key = token();
    desc[key] = token();
  }
  return desc;
}

}  // namespace io

namespace {

constexpr const char* kSurrogateHeader = "phykrig-surrogate";
constexpr const char* kDynamicsHeader = "phykrig-dynamics";
constexpr int kFormatVersion = 1;

void write_header(std::ostream& out, const char* header) {
  out << header << ' ' << kFormatVersion << '\n';
}

void read_header(io::Reader& r, const char* header) {
  r.expect(header);
  const long long version = r.integer();
  if (version != kFormatVersion) {
    throw IoError("model stream: unsupported format version " + std::to_string(version));
  }
}

void write_physics(std::ostream& out, const PhysicsModel* physics) {
  out << "physics " << (physics ? 1 : 0) << '\n';
  if (physics) io::write_description(out, physics->describe());
}

std::shared_ptr<const PhysicsModel> read_physics(io::Reader& r) {
  r.expect("physics");
  const long long present = r.integer();
  if (present == 0) return nullptr;
  auto desc = r.description();
  auto it = desc.find("component");
  if (it == desc.end()) {
    return std::shared_ptr<const PhysicsModel>(physics_from_description(desc));
  }
  const int component = std::stoi(it->second);
  desc.erase(it);
  std::shared_ptr<const PhysicsModel> base(physics_from_description(desc));
  return std::make_shared<PhysicsComponent>(std::move(base), component);
}

void write_transform(std::ostream& out, const ColumnTransform& t) {
  io::write_vector(out, "shift", t.shift);
  io::write_vector(out, "scale", t.scale);
}

ColumnTransform read_transform(io::Reader& r) {
  ColumnTransform t;
  t.shift = r.vector("shift");
  t.scale = r.vector("scale");
  if (t.shift.size() != t.scale.size()) {
    throw IoError("model stream: transform shift/scale size mismatch");
  }
  return t;
}

void write_rff(std::ostream& out, const std::string& name, const RFFMap& map) {
  out << name << '\n';
  out << "lengthscale ";
  io::write_double(out, map.lengthscale);
  out << '\n';
  io::write_matrix(out, "omega", map.omega);
  io::write_vector(out, "phase", map.phase);
}

RFFMap read_rff(io::Reader& r, const std::string& name) {
  r.expect(name);
  r.expect("lengthscale");
  RFFMap map;
  map.lengthscale = r.number();
  map.omega = r.matrix("omega");
  map.phase = r.vector("phase");
  if (map.phase.size() != map.omega.rows()) {
    throw IoError("model stream: feature map phase/omega mismatch");
  }
  return map;
}

std::unique_ptr<SurrogateModel> read_surrogate_body(io::Reader& r);

std::unique_ptr<AdjustmentGp> read_adjustment_gp(io::Reader& r, ModelKind kind) {
  auto physics = read_physics(r);
  ColumnTransform transform = read_transform(r);
  r.expect("residual_scale");
  const double residual_scale = r.number();
  Eigen::VectorXd theta = r.vector("theta");
  Eigen::MatrixXd X_std = r.matrix("inputs");
  Eigen::VectorXd resid = r.vector("residuals");
  Eigen::VectorXd fp = r.vector("prior_values");
  r.expect("end");
  return AdjustmentGp::from_parts(kind, std::move(physics), std::move(transform), residual_scale,
                                  std::move(X_std), std::move(resid), std::move(fp),
                                  std::move(theta));
}

std::unique_ptr<Ar1Surrogate> read_ar1(io::Reader& r) {
  r.expect("rho");
  const double rho = r.number();
  r.expect("low_fidelity");
  std::unique_ptr<SurrogateModel> stage1 = read_surrogate_body(r);
  auto* gp = dynamic_cast<AdjustmentGp*>(stage1.get());
  if (!gp) throw IoError("model stream: ar1 stage-1 model is not a GP");
  std::unique_ptr<AdjustmentGp> low_fi(gp);
  stage1.release();
  ColumnTransform transform = read_transform(r);
  r.expect("residual_scale");
  const double residual_scale = r.number();
  Eigen::VectorXd theta = r.vector("theta");
  Eigen::MatrixXd X_std = r.matrix("inputs");
  Eigen::VectorXd mu1 = r.vector("stage1_means");
  Eigen::VectorXd y = r.vector("targets");
  r.expect("end");
  return Ar1Surrogate::from_parts(std::move(low_fi), rho, std::move(transform), residual_scale,
                                  std::move(X_std), std::move(mu1), std::move(y),
                                  std::move(theta));
}

std::unique_ptr<RraSurrogate> read_rra(io::Reader& r) {
  auto physics = read_physics(r);
  if (!physics) throw IoError("model stream: rra requires a physics section");
  ColumnTransform transform = read_transform(r);
  r.expect("residual_scale");
  const double residual_scale = r.number();
  RFFMap map_rho = read_rff(r, "scale_features");
  RFFMap map_delta = read_rff(r, "bias_features");
  Eigen::VectorXd beta_mean = r.vector("weight_mean");
  Eigen::MatrixXd beta_cov = r.matrix("weight_covariance");
  r.expect("noise_variance");
  const double sigma_hat_sq = r.number();
  r.expect("ridge");
  const double lambda = r.number();
  r.expect("training_count");
  const long long count = r.integer();
  r.expect("end");
  return RraSurrogate::from_parts(std::move(physics), std::move(transform), residual_scale,
                                  std::move(map_rho), std::move(map_delta), std::move(beta_mean),
                                  std::move(beta_cov), sigma_hat_sq, lambda,
                                  static_cast<Eigen::Index>(count));
}

std::unique_ptr<SurrogateModel> read_surrogate_body(io::Reader& r) {
  read_header(r, kSurrogateHeader);
  r.expect("model");
  const ModelKind kind = model_kind_from_string(r.token());
  switch (kind) {
    case ModelKind::Ar1:
      return read_ar1(r);
    case ModelKind::Rra:
      return read_rra(r);
    default:
      return read_adjustment_gp(r, kind);
  }
}

}  // namespace

void AdjustmentGp::save(std::ostream& out) const {
  write_header(out, kSurrogateHeader);
  out << "model " << to_string(kind_) << '\n';
  write_physics(out, physics_.get());
  write_transform(out, input_transform_);
  out << "residual_scale ";
  io::write_double(out, residual_scale_);
  out << '\n';
  io::write_vector(out, "theta", theta_);
  io::write_matrix(out, "inputs", X_std_);
  io::write_vector(out, "residuals", resid_std_);
  io::write_vector(out, "prior_values", fp_train_);
  out << "end\n";
  if (!out) throw IoError("model stream: write failed");
}

void Ar1Surrogate::save(std::ostream& out) const {
  write_header(out, kSurrogateHeader);
  out << "model " << to_string(ModelKind::Ar1) << '\n';
  out << "rho ";
  io::write_double(out, rho_);
  out << '\n';
  out << "low_fidelity\n";
  low_fi_->save(out);
  write_transform(out, input_transform_);
  out << "residual_scale ";
  io::write_double(out, residual_scale_);
  out << '\n';
  io::write_vector(out, "theta", theta_);
  io::write_matrix(out, "inputs", X_std_);
  io::write_vector(out, "stage1_means", mu1_train_);
  io::write_vector(out, "targets", y_train_);
  out << "end\n";
  if (!out) throw IoError("model stream: write failed");
}

void RraSurrogate::save(std::ostream& out) const {
  write_header(out, kSurrogateHeader);
  out << "model " << to_string(ModelKind::Rra) << '\n';
  write_physics(out, physics_.get());
  write_transform(out, input_transform_);
  out << "residual_scale ";
  io::write_double(out, residual_scale_);
  out << '\n';
  write_rff(out, "scale_features", map_rho_);
  write_rff(out, "bias_features", map_delta_);
  io::write_vector(out, "weight_mean", beta_mean_);
  io::write_matrix(out, "weight_covariance", beta_cov_);
  out << "noise_variance ";
  io::write_double(out, sigma_hat_sq_);
  out << '\n';
  out << "ridge ";
  io::write_double(out, lambda_);
  out << '\n';
  out << "training_count " << training_count_ << '\n';
  out << "end\n";
  if (!out) throw IoError("model stream: write failed");
}

std::unique_ptr<SurrogateModel> load_surrogate(std::istream& in) {
  io::Reader r(in);
  return read_surrogate_body(r);
}

void SurrogateDynamics::save(std::ostream& out) const {
  write_header(out, kDynamicsHeader);
  out << "state_dim " << state_dim() << '\n';
  io::write_vector(out, "box_low", box_.low);
  io::write_vector(out, "box_high", box_.high);
  write_physics(out, physics_.get());
  out << "models " << per_dim_.size() << '\n';
  for (const auto& m : per_dim_) m->save(out);
  out << "end\n";
  if (!out) throw IoError("model stream: write failed");
}

std::unique_ptr<SurrogateDynamics> load_dynamics(std::istream& in) {
  io::Reader r(in);
  read_header(r, kDynamicsHeader);
  r.expect("state_dim");
  const long long sd = r.integer();
  DomainBox box;
  box.low = r.vector("box_low");
  box.high = r.vector("box_high");
  auto physics = read_physics(r);
  if (!physics) throw IoError("model stream: dynamics requires a physics section");
  r.expect("models");
  const long long count = r.integer();
  if (count != sd) throw IoError("model stream: dynamics model count mismatch");
  std::vector<std::unique_ptr<SurrogateModel>> per_dim;
  per_dim.reserve(static_cast<std::size_t>(count));
  for (long long j = 0; j < count; ++j) per_dim.push_back(read_surrogate_body(r));
  r.expect("end");
  return std::make_unique<SurrogateDynamics>(std::move(per_dim), std::move(physics),
                                             std::move(box));
}

}  // namespace phykrig
