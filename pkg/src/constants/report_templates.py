"""
Plain-text and HTML template constants for report generation
"""

NO_RUNS_MARKER = "no runs"

SUMMARY_TEXT_TEMPLATE = """VQ-CNNI experiment report
root: {root}
experiments: {n_experiments}, runs ok: {runs_ok}, runs failed: {runs_failed}
status: {status}

Per-model summary
{summary_table}

Ordering checks
{checks_table}
"""

PARTIAL_TEXT_TEMPLATE = """
Incomplete artifact sets
{partial_items}
"""

EMPTY_TEXT_TEMPLATE = """VQ-CNNI experiment report
root: {root}
{marker}
"""

REPORT_HTML_TEMPLATE = """
<!DOCTYPE html>
<html>
<head>
    <title>VQ-CNNI Experiment Report</title>
    <style>
        body {{
            font-family: Arial, sans-serif;
            margin: 0;
            padding: 20px;
            color: #333;
        }}
        .container {{
            max-width: 1200px;
            margin: 0 auto;
        }}
        h1, h2, h3 {{
            color: #0066cc;
        }}
        .metric-box {{
            background-color: #f5f5f5;
            border-radius: 5px;
            padding: 15px;
            margin-bottom: 20px;
            box-shadow: 0 2px 4px rgba(0, 0, 0, 0.1);
        }}
        .metrics {{
            display: flex;
            flex-wrap: wrap;
            gap: 20px;
        }}
        .metric {{
            flex: 1;
            min-width: 200px;
            padding: 15px;
            background-color: white;
            border-radius: 5px;
            box-shadow: 0 1px 3px rgba(0, 0, 0, 0.1);
        }}
        .positive {{
            color: green;
        }}
        .negative {{
            color: red;
        }}
        table {{
            width: 100%;
            border-collapse: collapse;
            margin: 20px 0;
        }}
        th, td {{
            padding: 12px 15px;
            text-align: left;
            border-bottom: 1px solid #ddd;
        }}
        th {{
            background-color: #f8f8f8;
        }}
        .chart-container {{
            margin: 30px 0;
        }}
        img {{
            max-width: 100%;
            height: auto;
            border: 1px solid #ddd;
            border-radius: 5px;
        }}
        .error-box {{
            border-left: 5px solid #e74c3c;
            background-color: #fdf7f7;
        }}
    </style>
</head>
<body>
    <div class="container">
        <h1>VQ-CNNI Experiment Report</h1>
        <p>Artifacts: {root}</p>

        <div class="metric-box">
            <h2>Overview</h2>
            <div class="metrics">
                <div class="metric">
                    <h3>Experiments</h3>
                    <p>{n_experiments}</p>
                </div>
                <div class="metric">
                    <h3>Runs</h3>
                    <p>ok: {runs_ok}, failed: <span class="{failed_class}">{runs_failed}</span></p>
                </div>
                <div class="metric">
                    <h3>Best median SWPE</h3>
                    <p>{best_swpe:.2f} dB ({best_model})</p>
                </div>
            </div>
        </div>

        <h2>Per-model summary</h2>
        <table>
            <tr>
                <th>Model</th>
                <th>Activation</th>
                <th>Runs</th>
                <th>Median SWPE exact (dB)</th>
                <th>Median SWPE shots (dB)</th>
                <th>Mean J</th>
                <th>Var J</th>
                <th>QFI</th>
            </tr>
            {summary_rows}
        </table>

        <h2>Ordering checks</h2>
        <table>
            <tr>
                <th>Group</th>
                <th>Check</th>
                <th>Value</th>
                <th>Passed</th>
            </tr>
            {check_rows}
        </table>

        {partial_section}

        {chart_sections}
    </div>
</body>
</html>
"""

SUMMARY_ROW_TEMPLATE = """
            <tr>
                <td>{model}</td>
                <td>{activation}</td>
                <td>{runs_ok}/{runs_total}</td>
                <td>{swpe_median_exact:.2f}</td>
                <td>{swpe_median_shots:.2f}</td>
                <td>{j_mean:.4f}</td>
                <td>{j_var:.3e}</td>
                <td>{qfi:.3f}</td>
            </tr>
"""

CHECK_ROW_TEMPLATE = """
            <tr>
                <td>{group}</td>
                <td>{check}</td>
                <td>{value}</td>
                <td class="{passed_class}">{passed}</td>
            </tr>
"""

PARTIAL_SECTION_TEMPLATE = """
        <div class="metric-box error-box">
            <h2>Incomplete artifact sets</h2>
            <ul>
                {partial_items}
            </ul>
        </div>
"""

CHART_SECTION_TEMPLATE = """
        <div class="chart-container">
            <h2>{title}</h2>
            <img src="{src}" alt="{title}">
        </div>
"""
