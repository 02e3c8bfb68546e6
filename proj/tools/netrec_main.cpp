#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    netrec::cli::PipelineConfig config;

    CLI::App app{"netrec - network activity recognition from Wireshark capture exports"};
    app.require_subcommand(1);
    app.set_config("--config", "", "configuration file (key=value; flags win)");

    app.add_option("--seed", config.seed, "seed for every shuffle/split")->capture_default_str();
    app.add_option("--labels", config.labels, "activity label set")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--class-name", config.class_attribute,
                   "name of the class attribute")
        ->capture_default_str();
    app.add_option("--nominal-threshold", config.nominal_threshold,
                   "distinct-value limit before a CSV column becomes text")
        ->capture_default_str();
    app.add_flag("--csv-no-header", config.csv_no_header, "CSV inputs carry no header row");

    std::string input;
    std::string output;
    std::vector<std::string> inputs;
    std::string data_path;
    std::string model_path;
    std::string test_path;
    std::string json_path;

    CLI::App* convert = app.add_subcommand("convert", "CSV capture export to ARFF");
    convert->add_option("input", input, "input CSV")->required();
    convert->add_option("output", output, "output ARFF")->required();

    CLI::App* preprocess = app.add_subcommand(
        "preprocess", "drop the ID column, strip Info quotes, label and merge captures");
    preprocess->add_option("inputs", inputs, "one capture per label (CSV or ARFF)")
        ->required()
        ->expected(-1);
    preprocess->add_option("--out", output, "merged labeled ARFF")->required();
    preprocess->add_option("--steps", config.steps,
                           "preprocessing steps, in order (drop:<col>, strip_quotes:<col>, "
                           "label, merge)")
        ->delimiter(',')
        ->capture_default_str();

    auto add_learner_options = [&config](CLI::App* cmd) {
        cmd->add_option("--learner", config.learner,
                        "j48 | naive_bayes | naive_bayes_updateable")
            ->capture_default_str();
        cmd->add_option("--criterion", config.criterion,
                        "attribute selection: gain_ratio (J48) or information_gain (ID3)")
            ->capture_default_str();
        cmd->add_option("--confidence", config.confidence, "pruning confidence, (0, 0.5]")
            ->capture_default_str();
        cmd->add_option("--min-leaf", config.min_leaf_weight, "minimum leaf weight")
            ->capture_default_str();
        cmd->add_flag("--no-pruning", config.no_pruning, "grow the tree without pruning");
        cmd->add_option("--max-depth", config.max_depth, "depth limit (0 = unlimited)")
            ->capture_default_str();
        cmd->add_option("--alpha", config.alpha, "Laplace smoothing for nominal likelihoods")
            ->capture_default_str();
    };

    CLI::App* train = app.add_subcommand("train", "train a model and persist it");
    train->add_option("data", data_path, "labeled ARFF/CSV")->required();
    train->add_option("--model", model_path, "output model file")->required();
    add_learner_options(train);

    CLI::App* cv = app.add_subcommand("cv", "evaluate a learner and print the metric table");
    cv->add_option("data", data_path, "labeled ARFF/CSV")->required();
    add_learner_options(cv);
    cv->add_option("--regime", config.regime,
                   "cross_validation | training_set | percentage_split | supplied_test_set")
        ->capture_default_str();
    cv->add_option("--k", config.k, "folds for cross_validation")->capture_default_str();
    cv->add_option("--fraction", config.train_fraction, "train fraction for percentage_split")
        ->capture_default_str();
    cv->add_option("--test", test_path, "test set for supplied_test_set");
    cv->add_option("--json", json_path, "also write the report as JSON");
    cv->add_flag("--no-timing", config.no_timing, "omit wall-clock rows (reproducible output)");

    CLI::App* predict =
        app.add_subcommand("predict", "classify unlabeled captures and print the score table");
    predict->add_option("--model", model_path, "trained model file")->required();
    predict->add_option("captures", inputs, "unlabeled captures (CSV or ARFF)")
        ->required()
        ->expected(-1);
    predict->add_option("--margin", config.margin,
                        "top-vs-runner-up margin for a high-confidence verdict")
        ->capture_default_str();
    predict->add_flag("--exclusive", config.exclusive,
                      "labels are mutually exclusive across the given captures");
    predict->add_option("--json", json_path, "also write the verdicts as JSON");

    CLI::App* inspect = app.add_subcommand("inspect", "print a persisted model");
    inspect->add_option("model", model_path, "model file")->required();

    CLI11_PARSE(app, argc, argv);

    if (convert->parsed()) {
        return netrec::cli::cmd_convert(config, input, output, std::cout, std::cerr);
    }
    if (preprocess->parsed()) {
        return netrec::cli::cmd_preprocess(config, inputs, output, std::cout, std::cerr);
    }
    if (train->parsed()) {
        return netrec::cli::cmd_train(config, data_path, model_path, std::cout, std::cerr);
    }
    if (cv->parsed()) {
        return netrec::cli::cmd_cv(config, data_path, test_path, json_path, std::cout,
                                   std::cerr);
    }
    if (predict->parsed()) {
        return netrec::cli::cmd_predict(config, model_path, inputs, json_path, std::cout,
                                        std::cerr);
    }
    return netrec::cli::cmd_inspect(model_path, std::cout, std::cerr);
}
