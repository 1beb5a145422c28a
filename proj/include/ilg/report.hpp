#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ilg/domain.hpp"

namespace ilg {

/** One verdict line: `measured` compared against `bound` within `tolerance` under `op`
 *  ("le": measured <= bound + tol, "ge": measured >= bound - tol,
 *   "abs_le": |measured| <= bound + tol). */
struct Check {
    std::string name;
    double measured = 0;
    double bound = 0;
    double tolerance = 0;
    std::string op = "le";
    bool pass = false;
    std::string provenance;

    static Check make(std::string name, double measured, double bound, double tol,
                      std::string op, std::string provenance) {
        Check c;
        c.name = std::move(name);
        c.measured = measured;
        c.bound = bound;
        c.tolerance = tol;
        c.op = std::move(op);
        c.provenance = std::move(provenance);
        if (c.op == "le") c.pass = measured <= bound + tol;
        else if (c.op == "ge") c.pass = measured >= bound - tol;
        else if (c.op == "abs_le") c.pass = std::fabs(measured) <= bound + tol;
        else throw error("Check: unknown op " + c.op);
        return c;
    }
};

struct VerificationReport {
    std::string instance;
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    void add(Check c) { checks.push_back(std::move(c)); }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["instance"] = instance;
        j["seed"] = seed;
        j["passed"] = all_pass();
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json cj;
            cj["name"] = c.name;
            cj["measured"] = c.measured;
            cj["bound"] = c.bound;
            cj["tolerance"] = c.tolerance;
            cj["op"] = c.op;
            cj["verdict"] = c.pass ? "pass" : "fail";
            cj["provenance"] = c.provenance;
            j["checks"].push_back(cj);
        }
        return j;
    }

    void write_json(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw config_error("cannot write report: " + path);
        out << to_json().dump(2) << "\n";
    }
};

}  // namespace ilg
