// Command-line front end. Everything goes through the C API in refadopt.h;
// flag values are passed to the library as strings and validated there.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <refadopt.h>

namespace {

int exit_code(refadopt_status status) {
  switch (status) {
    case REFADOPT_OK: return 0;
    case REFADOPT_ERR_USAGE: return 1;
    case REFADOPT_ERR_NETWORK: return 3;
    case REFADOPT_ERR_DATA:
    case REFADOPT_ERR_IO: return 2;
  }
  return 2;
}

int fail(refadopt_status status) {
  std::fprintf(stderr, "error: %s\n", refadopt_last_error());
  return exit_code(status);
}

struct FlagValues {
  std::string corpus;
  std::string cache_dir;
  std::string keywords;
  std::string exclusions;
  std::string threshold_high;
  std::string threshold_low;
  std::string crystal_k;
  std::string jaccard_n;
  std::string out;
  std::string min_similarity;
  std::string jobs;
  std::string seed;
  bool offline = false;
};

void add_flags(CLI::App* cmd, FlagValues& flags) {
  cmd->add_option("--corpus", flags.corpus, "corpus JSON file");
  cmd->add_option("--cache-dir", flags.cache_dir,
                  "directory for cached GitHub responses");
  cmd->add_option("--keywords", flags.keywords,
                  "keyword list override, one keyword per line");
  cmd->add_option("--exclusions", flags.exclusions,
                  "exclusion rules override (JSON)");
  cmd->add_option("--threshold-high", flags.threshold_high,
                  "upper similarity threshold for classification");
  cmd->add_option("--threshold-low", flags.threshold_low,
                  "lower similarity threshold for classification");
  cmd->add_option("--crystal-k", flags.crystal_k,
                  "number of trivially shared n-grams to discount");
  cmd->add_option("--jaccard-n", flags.jaccard_n, "character n-gram size");
  cmd->add_option("--out", flags.out, "output directory for stage files");
  cmd->add_flag("--offline", flags.offline, "use only cached API responses");
  cmd->add_option("--min-similarity", flags.min_similarity,
                  "flag mappings whose best similarity falls below this");
  cmd->add_option("--jobs", flags.jobs, "worker threads for mapping and scoring");
  cmd->add_option("--seed", flags.seed, "seed for the review-subset sampler");
}

std::vector<std::pair<std::string, std::string>> collect_settings(
    const CLI::App* cmd, const FlagValues& flags) {
  std::vector<std::pair<std::string, std::string>> settings;
  auto take = [&](const char* name, const std::string& value) {
    if (cmd->count(name) > 0) settings.emplace_back(name + 2, value);
  };
  take("--corpus", flags.corpus);
  take("--cache-dir", flags.cache_dir);
  take("--keywords", flags.keywords);
  take("--exclusions", flags.exclusions);
  take("--threshold-high", flags.threshold_high);
  take("--threshold-low", flags.threshold_low);
  take("--crystal-k", flags.crystal_k);
  take("--jaccard-n", flags.jaccard_n);
  take("--out", flags.out);
  take("--min-similarity", flags.min_similarity);
  take("--jobs", flags.jobs);
  take("--seed", flags.seed);
  if (cmd->count("--offline") > 0) settings.emplace_back("offline", "true");
  return settings;
}

int run_stage(const std::string& stage,
              const std::vector<std::pair<std::string, std::string>>& settings) {
  refadopt_config* config = refadopt_config_new();
  if (!config) return fail(REFADOPT_ERR_DATA);

  for (const auto& [key, value] : settings) {
    refadopt_status status =
        refadopt_config_set(config, key.c_str(), value.c_str());
    if (status != REFADOPT_OK) {
      refadopt_config_free(config);
      return fail(status);
    }
  }

  const char* warnings = nullptr;
  refadopt_status status =
      refadopt_run_stage(config, stage.c_str(), &warnings);
  if (warnings && warnings[0] != '\0') {
    std::fprintf(stderr, "%s\n", warnings);
  }
  refadopt_config_free(config);
  return status == REFADOPT_OK ? 0 : fail(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measures how much of an LLM refactoring suggestion survives "
               "into the committed code"};
  app.set_version_flag("--version", std::string(refadopt_version()));
  app.require_subcommand(1);

  static const std::vector<std::pair<const char*, const char*>> stages = {
      {"filter", "keep commits whose message names a refactoring"},
      {"fetch", "fill commit patches from the GitHub API or cache"},
      {"extract", "reconstruct changed files and pull code blocks"},
      {"map", "assign each changed file to its closest code block"},
      {"score", "compute the four similarity metrics"},
      {"classify", "label each datapoint with an adoption level"},
      {"report", "write CSV/JSON exports, aggregates, and histograms"},
      {"run", "execute the whole pipeline"},
  };

  FlagValues flags;
  for (const auto& [name, description] : stages) {
    add_flags(app.add_subcommand(name, description), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  return run_stage(chosen->get_name(), collect_settings(chosen, flags));
}
