#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbs/atlas.hpp"
#include "mbs/construction.hpp"
#include "mbs/fitting.hpp"

namespace mbs::cli {

/// Bad flags or an unsupported combination; exit status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    std::string construction = "hat";
    int qw = 3;
    int qp = 3;
    std::string boundary = "full";
    std::string local = "bezier";
    std::string blend = "hat";
    int n = 8;
    int quad_points = 0;
    std::string out;

    /// Throws UsageError for invalid names or parameter combinations.
    Construction to_construction() const;
    /// Open interval with n inner nodes; n must be positive.
    Domain interval() const;
};

/// xi,index,value for every active function at samples_per_element uniform
/// points per element. With `chart`, only points inside that chart's support.
void cmd_basis(const RunConfig& config, int samples_per_element, std::optional<int> chart, std::ostream& csv);

/// Writes the convergence table as CSV and returns the table.
ConvergenceTable cmd_convergence(const RunConfig& config, const std::vector<int>& levels, const std::string& target,
                                 std::ostream& csv);

/// Measured properties of a construction as a JSON object.
nlohmann::json cmd_check(const RunConfig& config);

/// s,eta,x,y,z rows; both endpoints of every element are written.
void cmd_curve(const RunConfig& config, const ControlPolygon& polygon, int samples_per_element, std::ostream& csv);

/// Parses "1,2,3" or "1..4".
std::vector<int> parse_levels(const std::string& spec);

/// Runs the command line and returns the process exit status.
int run(int argc, char** argv);

}  // namespace mbs::cli
