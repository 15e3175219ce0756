// Flat, typed key-value configuration with dotted sections. Units are
// explicit in key names (_kHz, _MHz, _us, _Wcm2); unknown keys are errors.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace slowlight {

class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text, const std::string& origin);

  double number(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  bool is_set(const std::string& key) const;  // explicitly present in the file

  void override_value(const std::string& key, const std::string& value);

  // Documented schema, as "key  default  description" lines.
  static std::string schema_help();

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> explicit_;

  void validate_key(const std::string& key, const std::string& value,
                    const std::string& where) const;
};

}  // namespace slowlight
