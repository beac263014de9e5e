from crsynth.config import WebSettings
from crsynth.web import create_app

settings = WebSettings.from_env()
app = create_app(settings)

if __name__ == '__main__':
    print(f"crsynth API on http://{settings.host}:{settings.port}")
    app.run(debug=settings.debug, host=settings.host, port=settings.port)
