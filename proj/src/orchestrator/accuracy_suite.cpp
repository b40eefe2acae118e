#include "powerbench/orchestrator/accuracy_suite.hpp"

#include <stdexcept>

#include "powerbench/emulator/server.hpp"
#include "powerbench/modbus/master.hpp"

namespace powerbench::orchestrator {

logger::FinishedSession run_accuracy_scenario(const emulator::Scenario& scenario, const AccuracyRunOptions& options) {
  if (!scenario.calibrator) throw std::invalid_argument("scenario '" + scenario.name + "' has no calibrator setting");
  if (!(options.poll_interval > 0.0)) throw std::invalid_argument("poll interval must be positive");

  SimulatedClock clock;
  const auto map = modbus::RegisterMap::project_default();
  emulator::MeterEmulator meter(scenario.profile, scenario.error, map, scenario.unit_id, &clock);
  emulator::EmulatorLink link(meter);

  logger::LoggerOptions lopts;
  lopts.output_dir = options.output_dir;
  lopts.sample_interval = options.poll_interval;
  lopts.csv_comments = options.csv_comments;
  logger::PowerLogger logger(clock, lopts);

  modbus::PollOptions popts;
  popts.unit_id = scenario.unit_id;
  popts.interval = options.poll_interval;
  popts.until = clock.now() + scenario.calibrator->duration;

  logger.start_logging(scenario.name);
  modbus::poll(link, map, clock, logger, popts);
  return logger.stop_logging();
}

}  // namespace powerbench::orchestrator
