from dotenv import load_dotenv
import os
load_dotenv()

OUTPUT_DIR = os.getenv('VQCNNI_OUTPUT_DIR', 'output')
WORKERS = int(os.getenv('VQCNNI_WORKERS', '1'))
LOG_LEVEL = os.getenv('VQCNNI_LOG_LEVEL', 'INFO').upper()
DEFAULT_PARTICLES = int(os.getenv('VQCNNI_DEFAULT_PARTICLES', '8'))
