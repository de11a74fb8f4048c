"""
Centralized lookup table for console messages of the GIBO benchmark runner.
"""

MESSAGES = {
    # Run command
    "loading_config": "[bold blue]🔹 Loading configuration from {path}[/bold blue]",
    "experiment_header": (
        "\n[bold blue]⚡ Experiment {experiment_id}: {kind}, dimensions {dimensions}, "
        "{trials} trial(s), optimizers {optimizers}[/bold blue]\n"
    ),
    "budget_info": "[blue]Budget: {budget} ({calls} oracle calls per trial)[/blue]",
    "config_error": "[bold red]⚠️ Configuration error: {error}[/bold red]",
    "trial_failed": (
        "[bold yellow]⚠️ Trial {trial} of {optimizer} at dimension {dimension} failed: {error}[/bold yellow]"
    ),
    "partial_failure": "[bold yellow]⚠️ {failed} of {total} trial(s) failed; see {summary}[/bold yellow]",
    "experiment_completed": (
        "[bold green]✅ Experiment completed successfully![/bold green]\n📁 Results saved in `{rows}` and `{summary}`"
    ),
    "summary_title": "Final {metric} per optimizer",
    # Export command
    "export_completed": "[bold green]✅ Exported {count} curve row(s) to `{out}`[/bold green]",
    "parse_error": "[bold red]⚠️ Cannot read {path}: {error}[/bold red]",
    "file_not_found": "[bold red]⚠️ File not found: {path}[/bold red]",
    "interrupted": "\n[bold yellow]Interrupted. Partial results were not written.[/bold yellow]",
}
