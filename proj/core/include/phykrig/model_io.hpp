#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace phykrig {

// Low-level helpers for the versioned text model format. Doubles are written
// as C hexfloats so that save -> load round-trips are bit exact.
namespace io {

void write_double(std::ostream& out, double v);
void write_vector(std::ostream& out, const std::string& name, const Eigen::VectorXd& v);
void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m);
void write_description(std::ostream& out, const std::map<std::string, std::string>& desc);

// Token reader over a text stream. All read_* methods throw IoError on
// malformed or truncated input.
class Reader {
public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string token();
  void expect(const std::string& keyword);
  long long integer();
  double number();
  Eigen::VectorXd vector(const std::string& name);
  Eigen::MatrixXd matrix(const std::string& name);
  std::map<std::string, std::string> description();

private:
  std::istream& in_;
};

}  // namespace io
}  // namespace phykrig
