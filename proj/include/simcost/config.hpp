#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "simcost/complexity.hpp"

namespace simcost {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelPreset { Custom, Pauli, AmplitudeDamping };

struct BoundSettings {
  double alpha = 1.0;
  double beta = 2.0;
  std::optional<double> epsilon;  // default 0.75, or 0.9 with an environment
  double delta = 0.01;
  std::optional<double> tau_target;
  std::optional<double> t_target;
};

struct SearchSettings {
  int restarts = 32;
  int iterations = 500;
  std::size_t amplification = 1;
};

struct ModelConfig {
  std::string name;
  std::uint64_t seed = 1;
  SystemDims dims;
  std::size_t qubits = 0;  // 0 when the system is not a register of qubits

  ModelPreset preset = ModelPreset::Custom;
  double rate = 1.0;
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;

  std::string gate_family;  // pauli | exchange | dilation | hamiltonians | explicit
  double tau = 1.0;
  std::vector<CMatrix> gate_generators;
  std::vector<CMatrix> gate_unitaries;

  std::string resource_kind;  // pauli | environment | custom
  std::vector<CMatrix> resource_members;
  std::vector<CMatrix> certificates;

  std::size_t ancilla_qubits = 0;

  BoundSettings bound;
  SearchSettings search;
  std::vector<double> sweep_t;
  std::vector<int> sweep_N;

  bool environment() const { return ancilla_qubits > 0; }
  std::size_t ancilla_dim() const { return std::size_t{1} << ancilla_qubits; }
  double epsilon() const;

  LindbladGenerator generator() const;
  GateSet gate_set() const;
  ResourceSet resource_set() const;
  std::vector<CMatrix> certificate_list() const;
};

// "c * P1 Q3 + c' * R2": 1-based sites, E the ancilla qubit; letters I X Y Z, L = |0><1|, R = |1><0|.
// Coefficients may carry an i or j suffix for imaginary values.
CMatrix parse_operator_string(const std::string& text, std::size_t system_qubits, bool allow_ancilla);

ModelConfig parse_config(const std::string& yaml_text);
ModelConfig load_config(const std::string& path);

}  // namespace simcost
