#ifndef HALFWAVE_CONFIG_HPP
#define HALFWAVE_CONFIG_HPP

// Flat key=value configuration with dotted section prefixes (sim.dt,
// sweep.epsilons as a comma list).  '#' starts a comment; whitespace around
// keys and values is trimmed.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace halfwave {

class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  /// Apply a "key=value" override (the CLI's --set flag).
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace halfwave

#endif
