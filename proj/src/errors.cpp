#include "graphtrack/errors.hpp"

namespace graphtrack {

IngestionError::IngestionError(const std::filesystem::path& path, const std::string& what)
    : Error(path.string() + ": " + what), path_(path) {}

GenerationError::GenerationError(const std::string& what, double achieved_density)
    : Error(what), achieved_density_(achieved_density) {}

ConfigError::ConfigError(const std::string& key, const std::string& what)
    : Error("config key '" + key + "': " + what), key_(key) {}

}  // namespace graphtrack
