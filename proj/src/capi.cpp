#include "sscfem/sscfem.h"

#include "sscfem/config.hpp"
#include "sscfem/error.hpp"
#include "sscfem/pipeline.hpp"

#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <sstream>
#include <string>

struct ssc_config {
    sscfem::RunConfig value;
};

struct ssc_solution {
    sscfem::SolveOutcome outcome;
};

namespace {

thread_local std::string last_error;

ssc_status fail(ssc_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

template <class F>
ssc_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const sscfem::ConfigError& e) {
        return fail(SSC_ERR_CONFIG, e.what());
    } catch (const sscfem::InputError& e) {
        return fail(SSC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const sscfem::ModelError& e) {
        return fail(SSC_ERR_MODEL, e.what());
    } catch (const sscfem::StateError& e) {
        return fail(SSC_ERR_STATE, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(SSC_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SSC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SSC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SSC_ERR_INTERNAL, "unknown error");
    }
}

ssc_status copy_out(const std::string& text, char* buf, size_t cap, size_t* needed) {
    if (needed) {
        *needed = text.size() + 1;
    }
    if (cap > 0) {
        if (!buf) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null buffer with nonzero capacity");
        }
        const size_t n = std::min(cap - 1, text.size());
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
    }
    return SSC_OK;
}

const sscfem::MeasureSolution* optimal(const ssc_solution* s) {
    if (!s->outcome.solution) {
        throw sscfem::StateError("solve did not reach an optimal solution (" +
                                 sscfem::to_string(s->outcome.lp.status) + ")");
    }
    return &*s->outcome.solution;
}

} // namespace

extern "C" {

const char* ssc_version(void) { return "1.0.0"; }

const char* ssc_last_error(void) { return last_error.c_str(); }

const char* ssc_status_name(ssc_status status) {
    switch (status) {
    case SSC_OK:
        return "ok";
    case SSC_ERR_INVALID_ARGUMENT:
        return "invalid_argument";
    case SSC_ERR_CONFIG:
        return "config";
    case SSC_ERR_MODEL:
        return "model";
    case SSC_ERR_STATE:
        return "state";
    case SSC_ERR_SOLVER:
        return "solver";
    case SSC_ERR_IO:
        return "io";
    case SSC_ERR_INTERNAL:
        return "internal";
    }
    return "unknown";
}

ssc_status ssc_config_create(ssc_config** out) {
    return guarded([&] {
        if (!out) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null output pointer");
        }
        *out = new ssc_config{};
        return SSC_OK;
    });
}

ssc_status ssc_config_load(const char* path, ssc_config** out) {
    return guarded([&] {
        if (!path || !out) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = nullptr;
        auto cfg = sscfem::load_config(path);
        *out = new ssc_config{std::move(cfg)};
        return SSC_OK;
    });
}

ssc_status ssc_config_parse(const char* text, ssc_config** out) {
    return guarded([&] {
        if (!text || !out) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = nullptr;
        auto cfg = sscfem::parse_config(text);
        *out = new ssc_config{std::move(cfg)};
        return SSC_OK;
    });
}

ssc_status ssc_config_set(ssc_config* config, const char* key, const char* value) {
    return guarded([&] {
        if (!config || !key || !value) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        sscfem::set_config_value(config->value, key, value);
        return SSC_OK;
    });
}

ssc_status ssc_config_serialize(const ssc_config* config, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        if (!config) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null config");
        }
        return copy_out(sscfem::serialize_config(config->value), buf, cap, needed);
    });
}

ssc_status ssc_config_validate(const ssc_config* config, char* buf, size_t cap, size_t* needed, int* errors) {
    return guarded([&] {
        if (!config) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null config");
        }
        const auto diags = sscfem::validate_config(config->value);
        std::string text;
        int n = 0;
        for (const auto& d : diags) {
            const bool err = d.severity == sscfem::Diagnostic::Severity::Error;
            n += err ? 1 : 0;
            text += (err ? "error: " : "warning: ") + d.message + "\n";
        }
        if (errors) {
            *errors = n;
        }
        return copy_out(text, buf, cap, needed);
    });
}

void ssc_config_destroy(ssc_config* config) { delete config; }

ssc_status ssc_run(const ssc_config* config, ssc_log_fn log, void* user, int* exit_code) {
    return guarded([&] {
        if (!config) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null config");
        }
        std::ostringstream out;
        const int code = sscfem::run(config->value, out);
        if (exit_code) {
            *exit_code = code;
        }
        std::istringstream lines(out.str());
        std::string line;
        while (std::getline(lines, line)) {
            if (log) {
                log(line.c_str(), user);
            }
        }
        if (code == sscfem::kExitSolver) {
            return fail(SSC_ERR_SOLVER, "at least one LP did not reach an optimal solution");
        }
        if (code != sscfem::kExitOk) {
            return fail(SSC_ERR_CONFIG, out.str());
        }
        return SSC_OK;
    });
}

ssc_status ssc_solve(const ssc_config* config, ssc_solution** out) {
    return guarded([&] {
        if (!config || !out) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = nullptr;
        const auto diags = sscfem::validate_config(config->value);
        for (const auto& d : diags) {
            if (d.severity == sscfem::Diagnostic::Severity::Error) {
                return fail(SSC_ERR_CONFIG, d.message);
            }
        }
        const auto problem = sscfem::make_problem(config->value);
        const auto disc = sscfem::discretizations(config->value).front();
        auto outcome = sscfem::solve_once(problem, disc, 1, config->value.threads);
        *out = new ssc_solution{std::move(outcome)};
        return SSC_OK;
    });
}

void ssc_solution_destroy(ssc_solution* solution) { delete solution; }

ssc_status ssc_solution_status(const ssc_solution* solution, const char** status) {
    return guarded([&] {
        if (!solution || !status) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        switch (solution->outcome.lp.status) {
        case sscfem::LPStatus::Optimal:
            *status = "optimal";
            break;
        case sscfem::LPStatus::Infeasible:
            *status = "infeasible";
            break;
        case sscfem::LPStatus::Unbounded:
            *status = "unbounded";
            break;
        case sscfem::LPStatus::IterationLimit:
            *status = "iteration_limit";
            break;
        case sscfem::LPStatus::NumericalFailure:
            *status = "numerical_failure";
            break;
        }
        return SSC_OK;
    });
}

ssc_status ssc_solution_cost(const ssc_solution* solution, double* cost) {
    return guarded([&] {
        if (!solution || !cost) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        *cost = optimal(solution)->cost;
        return SSC_OK;
    });
}

ssc_status ssc_solution_weights(const ssc_solution* solution, double* w1, double* w2) {
    return guarded([&] {
        if (!solution || !w1 || !w2) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        const auto* s = optimal(solution);
        *w1 = s->left.weight;
        *w2 = s->right.weight;
        return SSC_OK;
    });
}

ssc_status ssc_solution_cells(const ssc_solution* solution, size_t* cells) {
    return guarded([&] {
        if (!solution || !cells) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        *cells = solution->outcome.layout.cells();
        return SSC_OK;
    });
}

ssc_status ssc_solution_density(const ssc_solution* solution, double* breakpoints, double* gamma, size_t cap) {
    return guarded([&] {
        if (!solution || !breakpoints || !gamma) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        const auto* s = optimal(solution);
        if (cap < s->cells()) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "buffer smaller than the cell count");
        }
        std::copy(s->breakpoints.begin(), s->breakpoints.end(), breakpoints);
        std::copy(s->density.begin(), s->density.end(), gamma);
        return SSC_OK;
    });
}

ssc_status ssc_solution_average_control(const ssc_solution* solution, double x, double* out) {
    return guarded([&] {
        if (!solution || !out) {
            return fail(SSC_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = sscfem::average_control(*optimal(solution), x);
        return SSC_OK;
    });
}

} // extern "C"
